#pragma once

#include "pga/audio.hpp"
#include "pga/common.hpp"
#include "pga/enhance.hpp"
#include "pga/gain.hpp"
#include "pga/metrics.hpp"
#include "pga/noise.hpp"
#include "pga/presence.hpp"
#include "pga/spectrogram.hpp"
#include "pga/stft.hpp"
