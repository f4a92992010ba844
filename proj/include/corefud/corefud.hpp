#pragma once

#include "corefud/align.hpp"
#include "corefud/assignment.hpp"
#include "corefud/baselines.hpp"
#include "corefud/conllu.hpp"
#include "corefud/document.hpp"
#include "corefud/error.hpp"
#include "corefud/evaluate.hpp"
#include "corefud/heads.hpp"
#include "corefud/metrics.hpp"
#include "corefud/model.hpp"
#include "corefud/report.hpp"
#include "corefud/stats.hpp"
#include "corefud/transforms.hpp"
