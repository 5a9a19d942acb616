#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "ksnc/ray_set.hpp"

namespace ksnc {

struct CorpusEntry {
  std::string key;
  std::string title;
  int dim;
  int mu;
};

inline const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries = {
      {"kcbs-5", "KCBS pentagon, 5 rays in dimension 3", 3, 5},
      {"yu-oh-13", "Yu-Oh 13-ray set in dimension 3", 3, 13},
      {"cabello-18", "Cabello 18-ray Kochen-Specker set in dimension 4", 4, 18},
  };
  return entries;
}

inline bool is_corpus_key(std::string_view key) {
  for (const auto& e : corpus_entries())
    if (e.key == key) return true;
  return false;
}

namespace detail {

inline Ray real_ray(std::string name, std::vector<double> v) {
  Ray r;
  r.name = std::move(name);
  r.components.reserve(v.size());
  for (double x : v) r.components.emplace_back(x, 0.0);
  return r;
}

// Pentagon rays l_i ~ (sin t cos(4 pi i/5), sin t sin(4 pi i/5), cos t) with
// cos^2 t = cos(pi/5)/(1 + cos(pi/5)); consecutive rays come out orthogonal.
inline RaySet build_kcbs_5() {
  const double pi = std::acos(-1.0);
  const double c5 = std::cos(pi / 5.0);
  const double cos_t = std::sqrt(c5 / (1.0 + c5));
  const double sin_t = std::sqrt(1.0 / (1.0 + c5));
  std::vector<Ray> rays;
  for (int i = 1; i <= 5; ++i) {
    const double phi = 4.0 * pi * i / 5.0;
    rays.push_back(real_ray("l" + std::to_string(i),
                            {sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t}));
  }
  return make_ray_set(3, std::move(rays), kDefaultOrthoTolerance, "kcbs-5");
}

// Order P_1..P_13 = h0,h1,h2,h3, z2,y2+,y2-, z3,y3+,y3-, z1,y1+,y1-.
inline RaySet build_yu_oh_13() {
  std::vector<Ray> rays;
  rays.push_back(real_ray("h0", {1, 1, 1}));
  rays.push_back(real_ray("h1", {-1, 1, 1}));
  rays.push_back(real_ray("h2", {1, -1, 1}));
  rays.push_back(real_ray("h3", {1, 1, -1}));
  rays.push_back(real_ray("z2", {0, 1, 0}));
  rays.push_back(real_ray("y2+", {1, 0, 1}));
  rays.push_back(real_ray("y2-", {1, 0, -1}));
  rays.push_back(real_ray("z3", {0, 0, 1}));
  rays.push_back(real_ray("y3+", {1, 1, 0}));
  rays.push_back(real_ray("y3-", {1, -1, 0}));
  rays.push_back(real_ray("z1", {1, 0, 0}));
  rays.push_back(real_ray("y1+", {0, 1, 1}));
  rays.push_back(real_ray("y1-", {0, 1, -1}));
  return make_ray_set(3, std::move(rays), kDefaultOrthoTolerance, "yu-oh-13");
}

// 18 rays in dimension 4 forming 9 complete bases, each ray in exactly two.
inline RaySet build_cabello_18() {
  const std::vector<std::vector<double>> v = {
      {0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0},  {1, -1, 0, 0},  {0, 1, 0, 0},   {1, 0, 1, 0},
      {1, 0, -1, 0}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 1, 1}, {0, 0, 1, 1}, {0, 1, 0, -1},
      {1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}, {1, 1, -1, 1}, {1, 1, 1, -1}, {-1, 1, 1, 1}};
  std::vector<Ray> rays;
  for (size_t i = 0; i < v.size(); ++i)
    rays.push_back(real_ray("u" + std::to_string(i + 1), v[i]));
  return make_ray_set(4, std::move(rays), kDefaultOrthoTolerance, "cabello-18");
}

}  // namespace detail

inline RaySet corpus_ray_set(std::string_view key) {
  if (key == "kcbs-5") return detail::build_kcbs_5();
  if (key == "yu-oh-13") return detail::build_yu_oh_13();
  if (key == "cabello-18") return detail::build_cabello_18();
  throw InputError("unknown corpus key '" + std::string(key) +
                   "' (known: kcbs-5, yu-oh-13, cabello-18)");
}

}  // namespace ksnc
