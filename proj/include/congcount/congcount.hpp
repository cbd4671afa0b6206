#pragma once

#include "congcount/audit.hpp"
#include "congcount/config.hpp"
#include "congcount/counters.hpp"
#include "congcount/envelope.hpp"
#include "congcount/errors.hpp"
#include "congcount/expsums.hpp"
#include "congcount/modarith.hpp"
#include "congcount/rational.hpp"
#include "congcount/report.hpp"
#include "congcount/residues.hpp"
#include "congcount/smoothing.hpp"
#include "congcount/summation.hpp"
#include "congcount/sweep.hpp"
