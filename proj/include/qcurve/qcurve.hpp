#pragma once

// Umbrella header for the qcurve library.

#include "qcurve/bigfield.hpp"
#include "qcurve/cmtab.hpp"
#include "qcurve/error.hpp"
#include "qcurve/glv.hpp"
#include "qcurve/integer.hpp"
#include "qcurve/isogeny.hpp"
#include "qcurve/models.hpp"
#include "qcurve/qfamily.hpp"
#include "qcurve/setup.hpp"
#include "qcurve/weierstrass.hpp"
