#pragma once

#include "bodyforce/closed_form.hpp"
#include "bodyforce/errors.hpp"
#include "bodyforce/experiment.hpp"
#include "bodyforce/field_io.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/parallel.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/regularizer.hpp"
#include "bodyforce/simpson.hpp"
#include "bodyforce/spectral.hpp"
#include "bodyforce/summation.hpp"
