#ifndef IRS_SWIPT_HPP
#define IRS_SWIPT_HPP

#include "irs_swipt/numerics.hpp"
#include "irs_swipt/sdp.hpp"
#include "irs_swipt/config.hpp"
#include "irs_swipt/channel.hpp"
#include "irs_swipt/wpt.hpp"
#include "irs_swipt/swipt.hpp"
#include "irs_swipt/baselines.hpp"
#include "irs_swipt/oracle.hpp"
#include "irs_swipt/experiment.hpp"
#include "irs_swipt/verify.hpp"

#endif  // IRS_SWIPT_HPP
