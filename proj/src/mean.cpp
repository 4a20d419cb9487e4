#include "ccm/mean.hpp"

#include <algorithm>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

void require_fc(const GroupPtr& g, const char* what) {
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass(std::string(what) + " requires a finite Cayley group");
}

}  // namespace

MeanVector::MeanVector(GroupPtr g, std::vector<Rational> weights)
    : g_(std::move(g)), w_(std::move(weights)) {
  require_fc(g_, "MeanVector");
  if (w_.size() != g_->fc_order()) throw SchemaError("one weight per element required");
  Rational total(0);
  for (const Rational& x : w_) {
    if (x < Rational(0)) throw SchemaError("negative weight");
    total += x;
  }
  if (!(total == Rational(1))) throw SchemaError("weights must sum to one");
}

MeanVector MeanVector::uniform(const GroupPtr& g) {
  require_fc(g, "uniform mean");
  return MeanVector(g, std::vector<Rational>(g->fc_order(), Rational(1, (i64)g->fc_order())));
}

MeanVector MeanVector::point_mass(const GroupPtr& g, uint32_t at) {
  require_fc(g, "point mass");
  std::vector<Rational> w(g->fc_order(), Rational(0));
  w.at(at) = Rational(1);
  return MeanVector(g, std::move(w));
}

namespace {

Rational defect_dir(const MeanVector& mu, bool left) {
  const GroupPtr& g = mu.group();
  uint32_t n = g->fc_order();
  Rational worst(0);
  for (uint32_t t = 0; t < n; ++t) {
    Rational pos(0);
    for (uint32_t x = 0; x < n; ++x) {
      uint32_t tx = left ? g->fc_mul(t, x) : g->fc_mul(x, t);
      Rational d = mu.weight(tx) - mu.weight(x);
      if (d > Rational(0)) pos += d;
    }
    worst = std::max(worst, pos);
  }
  return worst;
}

}  // namespace

Rational defect_left(const MeanVector& mu) { return defect_dir(mu, true); }
Rational defect_right(const MeanVector& mu) { return defect_dir(mu, false); }

MeanVector smooth_mean(const MeanVector& mu) {
  const GroupPtr& g = mu.group();
  uint32_t n = g->fc_order();
  std::vector<Rational> out(n, Rational(0));
  for (uint32_t h = 0; h < n; ++h) {
    if (mu.weight(h).is_zero()) continue;
    for (uint32_t x = 0; x < n; ++x)
      out[x] += mu.weight(h) * mu.weight(g->fc_mul(h, x));
  }
  MeanVector smoothed(g, std::move(out));
  Rational dr = defect_right(mu);
  if (defect_right(smoothed) > dr) throw Error("smoothing increased the right defect");
  Rational bound = (Rational(1) + dr) / Rational(2) * defect_left(mu);
  if (defect_left(smoothed) > bound) throw Error("smoothing missed the contraction bound");
  return smoothed;
}

ConjugacyPartition conjugacy_partition(const GroupPtr& g) {
  require_fc(g, "conjugacy_partition");
  uint32_t n = g->fc_order();
  std::vector<char> done(n, 0);
  ConjugacyPartition part;
  for (uint32_t x = 0; x < n; ++x) {
    if (done[x]) continue;
    std::vector<uint16_t> cls;
    for (uint32_t t = 0; t < n; ++t) {
      uint32_t y = g->fc_mul(g->fc_mul(g->fc_inv(t), x), t);
      if (!done[y]) {
        done[y] = 1;
        cls.push_back((uint16_t)y);
      }
    }
    std::sort(cls.begin(), cls.end());
    part.classes.push_back(std::move(cls));
  }
  std::sort(part.classes.begin(), part.classes.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return part;
}

Rational k_uniform(const GroupPtr& g) {
  auto part = conjugacy_partition(g);
  return Rational((i64)part.class_count(), (i64)g->fc_order());
}

Rational k_mu(const GroupPtr& g, const MeanVector& mu) {
  if (mu.group().get() != g.get()) throw MixedGroups("mean over a different handle");
  auto part = conjugacy_partition(g);
  Rational sum(0);
  for (const auto& cls : part.classes) {
    Rational least = mu.weight(cls[0]);
    for (uint16_t x : cls) least = std::min(least, mu.weight(x));
    sum += least;
  }
  return sum;
}

KmuStrataReport kmu_strata_inequality(const GroupPtr& g, const MeanVector& mu, i64 n) {
  require_fc(g, "kmu_strata_inequality");
  if (n < 1) throw SchemaError("n must be positive");
  uint32_t size = g->fc_order();
  Rational xn(0);
  for (uint32_t x = 0; x < size; ++x) {
    i64 c = 0;
    for (uint32_t y = 0; y < size; ++y)
      if (g->fc_mul(x, y) == g->fc_mul(y, x)) ++c;
    if ((i64)size / c <= n) xn += mu.weight(x);
  }
  KmuStrataReport rep;
  rep.lhs = Rational(intops::add(n, 1)) * k_mu(g, mu);
  rep.rhs = Rational(1) + Rational(n) * xn;
  rep.holds = !(rep.lhs > rep.rhs);
  return rep;
}

}  // namespace ccm
