#pragma once
/// @file hopfcert.hpp
/// Umbrella header.

#include "hopfcert/dual.hpp"
#include "hopfcert/quaternion.hpp"
#include "hopfcert/geom.hpp"
#include "hopfcert/fields.hpp"
#include "hopfcert/calculus.hpp"
#include "hopfcert/quadrature.hpp"
#include "hopfcert/jet_table.hpp"
#include "hopfcert/phimap.hpp"
#include "hopfcert/functionals.hpp"
#include "hopfcert/verify.hpp"
#include "hopfcert/report.hpp"
#include "hopfcert/config.hpp"
