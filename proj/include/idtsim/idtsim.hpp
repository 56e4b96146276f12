#pragma once

#include "idtsim/bernstein.hpp"
#include "idtsim/core.hpp"
#include "idtsim/families.hpp"
#include "idtsim/idt_model.hpp"
#include "idtsim/infdiv.hpp"
#include "idtsim/maxstable.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"
#include "idtsim/samplers.hpp"
#include "idtsim/verify.hpp"
