#pragma once

#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "spectral.hpp"
#include "window.hpp"
#include "wpt.hpp"
#include "regions.hpp"
#include "dynamics.hpp"
#include "fit.hpp"
#include "lab.hpp"
#include "config.hpp"
#include "report.hpp"
#include "runner.hpp"
