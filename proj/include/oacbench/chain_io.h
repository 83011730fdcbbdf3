// Copyright 2026 The oacbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OACBENCH_CHAIN_IO_H_
#define OACBENCH_CHAIN_IO_H_

#include <string>
#include <vector>

#include "oacbench/kinchain.h"

namespace oacbench {

// Chain-description files are JSON documents:
//
//   {
//     "name": "panda7",
//     "joints": [{"axis": [x, y, z], "origin_xyz": [m], "origin_rpy": [rad],
//                 "q_limits": [lo, hi], "qd_limits": [lo, hi],
//                 "segment": [ax, ay, az, bx, by, bz]}, ...],
//     "ee_offset": {"xyz": [..], "rpy": [..]},
//     "home": [q0, ..., qn-1],                       (optional)
//     "control_points": [{"link": i, "point": [..]}] (optional)
//   }
//
// `segment` is the link geometry of the link driven by that joint, in the
// joint frame.
KinematicChain parse_chain(const std::string& json_text);
KinematicChain load_chain(const std::string& path);
std::string serialize_chain(const KinematicChain& chain);

// Chains shipped with the library: "panda7" and "planar2".
std::vector<std::string> builtin_chain_ids();
KinematicChain builtin_chain(const std::string& id);

// Resolves a built-in id or, failing that, a file path.
KinematicChain resolve_chain(const std::string& id_or_path);

}  // namespace oacbench

#endif  // OACBENCH_CHAIN_IO_H_
