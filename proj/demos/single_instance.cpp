// SPDX-License-Identifier: Apache-2.0
//
// mawet - movable-antenna wireless energy transfer toolkit
// Copyright (C) 2026 The mawet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Places nine movable antennas for three devices, then compares against a
// fixed 3x3 array on the same deployment.

#include "mawet.hpp"

#include <cstdio>
#include <random>

int main() {
    using namespace mawet;

    const ChannelParams channel; // 1 GHz, kappa = 2
    const Region region(1.0, channel.wavelength / 2);
    std::mt19937_64 rng(7);
    const Deployment devices = sample_deployment(rng, 3, 8.0, 8.0, 3.0, 1e-3);

    PsoParams pso = PsoParams::scaled(18, 30, 20);
    pso.seed = 7;
    PrecoderConfig precoder;
    precoder.randomization_count = 2000;

    const auto movable = run_sgpso(ImaCodec(9, region), devices, channel, pso, precoder);
    std::printf("movable antennas: p_T = %.4g W after %zu iterations\n", movable.p_tx, pso.iterations);
    for (Eigen::Index n = 0; n < movable.layout.size(); ++n)
        std::printf("  antenna %ld at (%+.3f, %+.3f) m, phase %+.3f rad\n", long(n), movable.layout[n].x(),
                    movable.layout[n].y(), movable.allocation.precoder.phases(n));

    const auto ura = fixed_ura_positions(9, region.min_spacing);
    const auto fixed = allocate_power(channel_matrix(ura, devices, channel), devices.power_requirements, precoder, rng);
    std::printf("fixed 3x3 array:  p_T = %.4g W\n", fixed.p_tx);
    return 0;
}
