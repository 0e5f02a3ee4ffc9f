#pragma once

#include "hml/bessel.hpp"
#include "hml/deform_identities.hpp"
#include "hml/fourier_field.hpp"
#include "hml/hermitian.hpp"
#include "hml/instances.hpp"
#include "hml/io.hpp"
#include "hml/local_model.hpp"
#include "hml/matrix_poly.hpp"
#include "hml/metricdiff.hpp"
#include "hml/painleve.hpp"
#include "hml/parallel.hpp"
#include "hml/poly.hpp"
#include "hml/quadrature.hpp"
#include "hml/radial_profile.hpp"
#include "hml/spectral.hpp"
#include "hml/sunform.hpp"
#include "hml/varsolve.hpp"
