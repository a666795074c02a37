#pragma once

#include "iwalab/catalog.hpp"
#include "iwalab/characters.hpp"
#include "iwalab/congruence.hpp"
#include "iwalab/deflation.hpp"
#include "iwalab/error.hpp"
#include "iwalab/gamma.hpp"
#include "iwalab/group.hpp"
#include "iwalab/group_ring.hpp"
#include "iwalab/harness.hpp"
#include "iwalab/hom.hpp"
#include "iwalab/int_matrix.hpp"
#include "iwalab/marking.hpp"
#include "iwalab/padic.hpp"
#include "iwalab/presentation.hpp"
#include "iwalab/restriction.hpp"
#include "iwalab/zmod_span.hpp"
