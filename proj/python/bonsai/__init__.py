# Copyright 2026 The Bonsai Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the bonsai dual-deduplication engine."""

from ._core import (
    BonsaiError,
    CloudEngine,
    Deviation,
    Policy,
    SystemConfig,
    ccr_model,
    count_embeddings,
    deletion_positions,
    draw_seeds,
    huffman_codes,
    posterior,
    preimage_count,
    reconstruct,
    tcr_constant,
    tcr_model,
    transform,
    ucr_model,
    uniform_policy,
    weak_report,
)

__all__ = [
    "BonsaiError",
    "CloudEngine",
    "Deviation",
    "Policy",
    "SystemConfig",
    "ccr_model",
    "count_embeddings",
    "deletion_positions",
    "draw_seeds",
    "huffman_codes",
    "posterior",
    "preimage_count",
    "reconstruct",
    "tcr_constant",
    "tcr_model",
    "transform",
    "ucr_model",
    "uniform_policy",
    "weak_report",
]
