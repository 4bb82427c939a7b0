#pragma once

#include "cdiff/affine.hpp"
#include "cdiff/classify.hpp"
#include "cdiff/difftab.hpp"
#include "cdiff/errors.hpp"
#include "cdiff/field.hpp"
#include "cdiff/poly.hpp"
#include "cdiff/rng.hpp"
#include "cdiff/spn.hpp"
#include "cdiff/structure.hpp"
#include "cdiff/tower.hpp"
