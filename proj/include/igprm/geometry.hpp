// Copyright (c) 2026 The igprm Authors
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

#pragma once

#include <cmath>

namespace igprm
{

/// Continuous position in cell units; cell (i, j) covers [i, i+1) x [j, j+1).
struct Point
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
};

struct Cell
{
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell &, const Cell &) = default;
};

inline double distance(Point a, Point b)
{
  return std::hypot(b.x - a.x, b.y - a.y);
}

inline Point cell_center(Cell c)
{
  return {c.x + 0.5, c.y + 0.5};
}

}  // namespace igprm
