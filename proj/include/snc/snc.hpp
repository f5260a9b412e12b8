#pragma once

#include "snc/field.hpp"
#include "snc/matrix.hpp"
#include "snc/network.hpp"
#include "snc/attack.hpp"
#include "snc/robust_code.hpp"
#include "snc/privacy_amp.hpp"
#include "snc/secrecy_oracle.hpp"
#include "snc/scenarios.hpp"
#include "snc/experiment.hpp"
