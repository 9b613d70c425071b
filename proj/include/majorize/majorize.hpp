#pragma once

// Joint majorization of commuting Hermitian families: decisions, unitary
// mixture certificates, and their extension to grid-sampled matrix fields.

#include "majorize/abelian_family.hpp"
#include "majorize/birkhoff.hpp"
#include "majorize/complex_matrix.hpp"
#include "majorize/demos.hpp"
#include "majorize/doubly_stochastic.hpp"
#include "majorize/ds_witness.hpp"
#include "majorize/errors.hpp"
#include "majorize/field_certify.hpp"
#include "majorize/field_checks.hpp"
#include "majorize/fields.hpp"
#include "majorize/hermitian_eig.hpp"
#include "majorize/hyperplane_max.hpp"
#include "majorize/json_io.hpp"
#include "majorize/mixtures.hpp"
#include "majorize/probability.hpp"
#include "majorize/random.hpp"
#include "majorize/simplex.hpp"
