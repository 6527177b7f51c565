#pragma once

#include "qos/error.hpp"
#include "qos/qstate.hpp"
#include "qos/primitives.hpp"
#include "qos/locc.hpp"
#include "qos/schemes.hpp"
#include "qos/analysis.hpp"
#include "qos/config.hpp"
#include "qos/report.hpp"
