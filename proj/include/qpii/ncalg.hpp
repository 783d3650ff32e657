#pragma once

#include "qpii/ncalg/coefficient.hpp"
#include "qpii/ncalg/derivation.hpp"
#include "qpii/ncalg/polynomial.hpp"
#include "qpii/ncalg/rewrite.hpp"
#include "qpii/ncalg/text.hpp"
