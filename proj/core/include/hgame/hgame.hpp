#pragma once

#include "hgame/bilevel_quad.hpp"
#include "hgame/errors.hpp"
#include "hgame/game.hpp"
#include "hgame/mlmf_cournot.hpp"
#include "hgame/residual.hpp"
#include "hgame/rng.hpp"
#include "hgame/run_report.hpp"
#include "hgame/sg.hpp"
#include "hgame/smoothing_br.hpp"
#include "hgame/stats.hpp"
#include "hgame/synthetic.hpp"
#include "hgame/vr_spp.hpp"
