#pragma once

#include "netdesign/errors.hpp"
#include "netdesign/cost_model.hpp"
#include "netdesign/network.hpp"
#include "netdesign/construction.hpp"
#include "netdesign/flow.hpp"
#include "netdesign/shortest_path.hpp"
#include "netdesign/simplex.hpp"
#include "netdesign/certificate.hpp"
#include "netdesign/mc_solver.hpp"
#include "netdesign/frank_wolfe.hpp"
#include "netdesign/parallel_forms.hpp"
#include "netdesign/design.hpp"
#include "netdesign/set_properties.hpp"
#include "netdesign/greedy.hpp"
#include "netdesign/scenarios.hpp"
#include "netdesign/io_json.hpp"
