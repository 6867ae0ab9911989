// Copyright 2026 The qqvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Umbrella header for the qqvqe library.

#include "qqvqe/ansatz.hpp"
#include "qqvqe/errors.hpp"
#include "qqvqe/hamiltonian.hpp"
#include "qqvqe/io.hpp"
#include "qqvqe/linalg.hpp"
#include "qqvqe/optim.hpp"
#include "qqvqe/qem.hpp"
#include "qqvqe/qpu.hpp"
#include "qqvqe/random.hpp"
#include "qqvqe/vqe.hpp"
