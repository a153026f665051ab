#pragma once

#include "incapax/antideg.hpp"
#include "incapax/channel.hpp"
#include "incapax/forbidden.hpp"
#include "incapax/json_io.hpp"
#include "incapax/locc.hpp"
#include "incapax/opalg.hpp"
#include "incapax/report.hpp"
#include "incapax/zoo.hpp"
