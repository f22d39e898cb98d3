#include "ietlab/perm.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "ietlab/error.hpp"
#include "ietlab/lattice.hpp"

namespace ietlab {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const int d = static_cast<int>(image_.size());
  if (d == 0) throw InvalidInput("empty permutation");
  inverse_.assign(image_.size(), 0);
  for (int i = 1; i <= d; ++i) {
    int v = image_[static_cast<std::size_t>(i - 1)];
    if (v < 1 || v > d || inverse_[static_cast<std::size_t>(v - 1)] != 0)
      throw InvalidInput("not a permutation of 1.." + std::to_string(d));
    inverse_[static_cast<std::size_t>(v - 1)] = i;
  }
}

Permutation Permutation::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<int> image;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw InvalidInput("bad permutation entry '" + tok + "'");
    image.push_back(v);
  }
  return Permutation(std::move(image));
}

std::string Permutation::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(image_[i]);
  }
  return s;
}

bool is_irreducible(const Permutation& p) {
  const int d = p.size();
  int maxImage = 0;
  for (int k = 1; k < d; ++k) {
    maxImage = std::max(maxImage, p(k));
    if (maxImage == k) return false;
  }
  return true;
}

bool is_rotation(const Permutation& p) {
  const int d = p.size();
  for (int i = 1; i < d; ++i)
    if (p(i + 1) != p(i) % d + 1) return false;
  return true;
}

bool is_standard(const Permutation& p) { return p(1) == p.size() && p(p.size()) == 1; }

void require_irreducible(const Permutation& p) {
  if (!is_irreducible(p)) throw ReducibleError(p.to_string());
}

std::vector<Permutation> irreducible_permutations(int d) {
  std::vector<int> img(static_cast<std::size_t>(d));
  std::iota(img.begin(), img.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation p(img);
    if (is_irreducible(p)) out.push_back(std::move(p));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Permutation rauzy_successor(const Permutation& p, RauzyType type) {
  require_irreducible(p);
  const int d = p.size();
  const int piv = p.inv(d);
  std::vector<int> img(static_cast<std::size_t>(d));
  auto at = [&](int i) -> int& { return img[static_cast<std::size_t>(i - 1)]; };
  if (type == RauzyType::type1) {
    for (int i = 1; i <= d; ++i) {
      if (i <= piv)
        at(i) = p(i);
      else if (i == piv + 1)
        at(i) = p(d);
      else
        at(i) = p(i - 1);
    }
  } else {
    const int last = p(d);
    for (int i = 1; i <= d; ++i) {
      if (p(i) <= last)
        at(i) = p(i);
      else if (p(i) < d)
        at(i) = p(i) + 1;
      else
        at(i) = last + 1;
    }
  }
  return Permutation(std::move(img));
}

std::pair<Permutation, Permutation> rauzy_neighbors(const Permutation& p) {
  return {rauzy_successor(p, RauzyType::type1), rauzy_successor(p, RauzyType::type2)};
}

std::vector<Permutation> rauzy_class(const Permutation& p) {
  require_irreducible(p);
  std::set<Permutation> seen{p};
  std::queue<Permutation> todo;
  todo.push(p);
  while (!todo.empty()) {
    Permutation q = todo.front();
    todo.pop();
    auto [a, b] = rauzy_neighbors(q);
    for (auto& n : {a, b})
      if (seen.insert(n).second) todo.push(n);
  }
  return {seen.begin(), seen.end()};
}

SingularityData singularity_data(const Permutation& p) {
  require_irreducible(p);
  const int d = p.size();
  SingularityData s;
  s.sigma.assign(static_cast<std::size_t>(d + 1), 0);
  s.sigma[0] = p.inv(1) - 1;
  for (int i = 1; i <= d; ++i) {
    if (i == p.inv(d))
      s.sigma[static_cast<std::size_t>(i)] = d;
    else
      s.sigma[static_cast<std::size_t>(i)] = p.inv(p(i) + 1) - 1;
  }
  std::vector<bool> mark(static_cast<std::size_t>(d + 1), false);
  for (int start = 0; start <= d; ++start) {
    if (mark[static_cast<std::size_t>(start)]) continue;
    std::vector<int> orbit;
    int x = start;
    while (!mark[static_cast<std::size_t>(x)]) {
      mark[static_cast<std::size_t>(x)] = true;
      orbit.push_back(x);
      x = s.sigma[static_cast<std::size_t>(x)];
    }
    if (x != start) throw Error("singularity map is not a bijection for " + p.to_string());
    std::sort(orbit.begin(), orbit.end());
    int nu = static_cast<int>(std::count_if(orbit.begin(), orbit.end(), [d](int k) { return k >= 1 && k <= d - 1; }));
    s.coneOrders.push_back(nu);
    s.orbits.push_back(std::move(orbit));
  }
  s.nOrbits = static_cast<int>(s.orbits.size());
  s.genus = (d - s.nOrbits + 1) / 2;
  return s;
}

std::vector<BigInt> HSubspace::coordinates(const std::vector<BigInt>& w) const {
  return leftInverse.apply(w);
}

bool HSubspace::contains(const std::vector<Rational>& w) const {
  for (const auto& b : annihilators)
    if (dot(b, w) != 0) return false;
  return true;
}

HSubspace h_subspace(const Permutation& p) {
  SingularityData s = singularity_data(p);
  const int d = p.size();
  HSubspace h;
  h.d = d;
  BigMatrix eqs(s.orbits.size(), static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < s.orbits.size(); ++k) {
    std::vector<bool> in(static_cast<std::size_t>(d + 1), false);
    for (int x : s.orbits[k]) in[static_cast<std::size_t>(x)] = true;
    std::vector<Rational> b(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) {
      int v = int(in[static_cast<std::size_t>(i - 1)]) - int(in[static_cast<std::size_t>(i)]);
      b[static_cast<std::size_t>(i - 1)] = v;
      eqs(k, static_cast<std::size_t>(i - 1)) = v;
    }
    h.annihilators.push_back(std::move(b));
  }
  h.rationalBasis = rational_kernel(matrix_cast<Rational>(eqs));
  h.dim = static_cast<int>(h.rationalBasis.rows());
  h.latticeBasis = integer_kernel(eqs).transpose();
  h.leftInverse = integer_left_inverse(h.latticeBasis);
  return h;
}

std::vector<std::vector<int>> nr_vectors(const Permutation& p) {
  const int d = p.size();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) {
      int& v = out[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      if (p(j) < p(i) && j > i)
        v = 1;
      else if (p(j) > p(i) && j < i)
        v = -1;
    }
  return out;
}

}  // namespace ietlab
