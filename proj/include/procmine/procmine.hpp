#pragma once

#include "procmine/align.hpp"
#include "procmine/analytics.hpp"
#include "procmine/conformance.hpp"
#include "procmine/convert.hpp"
#include "procmine/csv.hpp"
#include "procmine/dfg.hpp"
#include "procmine/dot.hpp"
#include "procmine/errors.hpp"
#include "procmine/eventlog.hpp"
#include "procmine/heuristics.hpp"
#include "procmine/inductive.hpp"
#include "procmine/parallel.hpp"
#include "procmine/petri.hpp"
#include "procmine/pnml.hpp"
#include "procmine/process_tree.hpp"
#include "procmine/replay.hpp"
#include "procmine/systematic.hpp"
#include "procmine/timeutil.hpp"
#include "procmine/xes.hpp"
#include "procmine/xml.hpp"
