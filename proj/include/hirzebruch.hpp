#pragma once

#include "hirzebruch/errors.hpp"
#include "hirzebruch/numeric.hpp"
#include "hirzebruch/multipoly.hpp"
#include "hirzebruch/series.hpp"
#include "hirzebruch/symmetric.hpp"
#include "hirzebruch/elliptic.hpp"
#include "hirzebruch/genus.hpp"
#include "hirzebruch/verifier.hpp"
#include "hirzebruch/identities.hpp"
#include "hirzebruch/degenerate.hpp"
