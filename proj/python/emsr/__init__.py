# Copyright 2026 emsr contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""epsilon-MSR erasure codes with bandwidth-metered repair."""

try:
    from ._emsr import Code, Error, ag_plan, fw_lower_bound, simulate
except ImportError:  # test trees load the extension from the build directory
    from _emsr import Code, Error, ag_plan, fw_lower_bound, simulate

__all__ = ["Code", "Error", "ag_plan", "fw_lower_bound", "simulate"]
