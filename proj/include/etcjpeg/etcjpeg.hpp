#pragma once

// Umbrella header for the whole library.

#include "etcjpeg/analysis.hpp"
#include "etcjpeg/attack.hpp"
#include "etcjpeg/blocks.hpp"
#include "etcjpeg/chacha20.hpp"
#include "etcjpeg/cipher.hpp"
#include "etcjpeg/color.hpp"
#include "etcjpeg/d4.hpp"
#include "etcjpeg/errors.hpp"
#include "etcjpeg/image.hpp"
#include "etcjpeg/jpeg_io.hpp"
#include "etcjpeg/keyschedule.hpp"
#include "etcjpeg/util.hpp"
