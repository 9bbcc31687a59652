#pragma once

#include "starfix/errors.hpp"
#include "starfix/tnorm.hpp"
#include "starfix/group.hpp"
#include "starfix/space.hpp"
#include "starfix/measure.hpp"
#include "starfix/gifs.hpp"
#include "starfix/fixpoint.hpp"
#include "starfix/oracle.hpp"
#include "starfix/io/config.hpp"
#include "starfix/io/output.hpp"
#include "starfix/io/run.hpp"
