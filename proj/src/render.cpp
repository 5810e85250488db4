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

#include "igprm/render.hpp"

#include <fstream>
#include <sstream>

#include "igprm/error.hpp"

namespace igprm::render
{

std::string svg(const Scene & scene)
{
  if (scene.env == nullptr) {
    throw Error(Errc::InvalidArgument, "scene needs an environment");
  }
  const EnvironmentMap & env = *scene.env;
  const double s = scene.cell_px;
  std::ostringstream o;
  o.precision(6);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << env.width() * s << "\" height=\""
    << env.height() * s << "\" viewBox=\"0 0 " << env.width() * s << ' ' << env.height() * s << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << env.width() * s << "\" height=\"" << env.height() * s
    << "\" fill=\"#ffffff\"/>\n";

  // one rect per horizontal run of equal non-free cells
  o << "<g id=\"obstacles\" stroke=\"none\">\n";
  for (int y = 0; y < env.height(); ++y) {
    int x = 0;
    while (x < env.width()) {
      const CellClass c = env.at(x, y);
      int end = x + 1;
      while (end < env.width() && env.at(end, y) == c) {
        ++end;
      }
      std::string_view color;
      switch (c) {
        case CellClass::Wall: color = kWallColor; break;
        case CellClass::StepLow: color = kStepLowColor; break;
        case CellClass::StepHigh: color = kStepHighColor; break;
        case CellClass::Free: break;
      }
      if (!color.empty()) {
        o << "<rect x=\"" << x * s << "\" y=\"" << y * s << "\" width=\"" << (end - x) * s
          << "\" height=\"" << s << "\" fill=\"" << color << "\"/>\n";
      }
      x = end;
    }
  }
  o << "</g>\n";

  if (scene.roadmap != nullptr && !scene.roadmap->edges().empty()) {
    const auto & nodes = scene.roadmap->nodes();
    o << "<g id=\"roadmap\" stroke=\"" << kEdgeColor << "\" stroke-width=\"" << 0.12 * s << "\">\n";
    for (const auto & e : scene.roadmap->edges()) {
      o << "<line x1=\"" << nodes[e.a].x * s << "\" y1=\"" << nodes[e.a].y * s << "\" x2=\""
        << nodes[e.b].x * s << "\" y2=\"" << nodes[e.b].y * s << "\"/>\n";
    }
    o << "</g>\n";
  }

  if (scene.path != nullptr && scene.path->size() >= 2) {
    o << "<polyline id=\"path\" fill=\"none\" stroke=\"" << kPathColor << "\" stroke-width=\""
      << 0.35 * s << "\" points=\"";
    for (std::size_t i = 0; i < scene.path->size(); ++i) {
      const Point & p = (*scene.path)[i];
      o << (i ? " " : "") << p.x * s << ',' << p.y * s;
    }
    o << "\"/>\n";
  }

  o << "<circle id=\"start\" cx=\"" << scene.start.x * s << "\" cy=\"" << scene.start.y * s
    << "\" r=\"" << 0.9 * s << "\" fill=\"" << kStartColor << "\"/>\n";
  o << "<circle id=\"goal\" cx=\"" << scene.goal.x * s << "\" cy=\"" << scene.goal.y * s
    << "\" r=\"" << 0.9 * s << "\" fill=\"" << kGoalColor << "\"/>\n";
  o << "</svg>\n";
  return o.str();
}

void render_svg(
  const EnvironmentMap & env, const Roadmap * roadmap, const std::vector<Point> * path,
  Point start, Point goal, const std::filesystem::path & out_path)
{
  Scene scene;
  scene.env = &env;
  scene.roadmap = roadmap;
  scene.path = path;
  scene.start = start;
  scene.goal = goal;
  const std::string text = svg(scene);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw Error(Errc::IoError, "cannot write " + out_path.string());
  }
}

}  // namespace igprm::render
