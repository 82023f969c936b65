// Copyright 2026 The PixelVeil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIXELVEIL_PIXELVEIL_HPP
#define PIXELVEIL_PIXELVEIL_HPP

#include "pixelveil/image.hpp"
#include "pixelveil/image_io.hpp"
#include "pixelveil/lad.hpp"
#include "pixelveil/metrics.hpp"
#include "pixelveil/pixel_mechanism.hpp"
#include "pixelveil/random.hpp"
#include "pixelveil/simplex.hpp"
#include "pixelveil/sweep.hpp"
#include "pixelveil/vector_json.hpp"
#include "pixelveil/vector_mechanism.hpp"

#endif  // PIXELVEIL_PIXELVEIL_HPP
