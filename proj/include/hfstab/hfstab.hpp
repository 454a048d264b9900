#pragma once

#include "hfstab/error.hpp"
#include "hfstab/dispersion.hpp"
#include "hfstab/omega_dsl.hpp"
#include "hfstab/models.hpp"
#include "hfstab/parallel.hpp"
#include "hfstab/traveling_wave.hpp"
#include "hfstab/elliptic.hpp"
#include "hfstab/collision.hpp"
#include "hfstab/krein.hpp"
#include "hfstab/waves.hpp"
#include "hfstab/hill.hpp"
#include "hfstab/io.hpp"
#include "hfstab/commands.hpp"
