#ifndef ICCDEC_ICCDEC_HPP_
#define ICCDEC_ICCDEC_HPP_

#include "iccdec/cardinal.hpp"
#include "iccdec/checked_int.hpp"
#include "iccdec/cli.hpp"
#include "iccdec/descriptor_io.hpp"
#include "iccdec/eisenstein.hpp"
#include "iccdec/error.hpp"
#include "iccdec/finite_table.hpp"
#include "iccdec/group_core.hpp"
#include "iccdec/icc_rules.hpp"
#include "iccdec/manifold.hpp"
#include "iccdec/matrix_groups.hpp"
#include "iccdec/oracle.hpp"
#include "iccdec/seifert.hpp"
#include "iccdec/verdict.hpp"
#include "iccdec/words.hpp"

#endif  // ICCDEC_ICCDEC_HPP_
