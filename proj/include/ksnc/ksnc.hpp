#pragma once

// Kochen-Specker / noncontextuality inequality toolkit: ray sets and their
// orthogonality structure, exact classical bounds over 0/1 assignments, the
// F~ conversion of KS inequalities into noncontextuality inequalities, and
// eigenvalue certification of quantum violations.

#include "ksnc/classical.hpp"
#include "ksnc/conversion.hpp"
#include "ksnc/corpus.hpp"
#include "ksnc/errors.hpp"
#include "ksnc/expression.hpp"
#include "ksnc/json_reports.hpp"
#include "ksnc/ks_rules.hpp"
#include "ksnc/matrix.hpp"
#include "ksnc/orthogonality.hpp"
#include "ksnc/quantum.hpp"
#include "ksnc/rational.hpp"
#include "ksnc/ray_set.hpp"
#include "ksnc/ray_set_io.hpp"
