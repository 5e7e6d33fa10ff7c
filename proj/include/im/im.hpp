#pragma once

#include "im/tokens.hpp"
#include "im/lang.hpp"
#include "im/enumerate.hpp"
#include "im/transform.hpp"
#include "im/verify.hpp"
#include "im/inverse.hpp"
#include "im/catalog.hpp"
#include "im/metric.hpp"
#include "im/closure.hpp"
#include "im/harness.hpp"
#include "im/config.hpp"
