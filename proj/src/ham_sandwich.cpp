#include "udr/ham_sandwich.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "udr/geometry.hpp"
#include "udr/rng.hpp"

namespace udr {

namespace {

// Lifted (Veronese) view over normalized coordinates. Row p holds all
// monomials of degree <= degree at point p, constant first, graded-lex after;
// a coefficient vector in this basis IS a PolyFactor in normalized coords.
struct Lift {
  int degree = 0;
  int dim = 0;
  double cx = 0, cy = 0, sx = 1, sy = 1;
  std::vector<double> V;

  const double* row(std::size_t p) const { return &V[p * static_cast<std::size_t>(dim)]; }
};

Lift build_lift(const std::vector<std::array<double, 2>>& pts, int degree) {
  Lift L;
  L.degree = degree;
  L.dim = veronese_dim(degree) + 1;
  BBox bb = bounding_box(pts);
  L.cx = 0.5 * (bb.xmin + bb.xmax);
  L.cy = 0.5 * (bb.ymin + bb.ymax);
  L.sx = bb.width() > 0 ? 2.0 / bb.width() : 1.0;
  L.sy = bb.height() > 0 ? 2.0 / bb.height() : 1.0;
  L.V.resize(pts.size() * static_cast<std::size_t>(L.dim));
  std::vector<double> xp(degree + 1), yp(degree + 1);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    double x = (pts[p][0] - L.cx) * L.sx;
    double y = (pts[p][1] - L.cy) * L.sy;
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= degree; ++i) {
      xp[i] = xp[i - 1] * x;
      yp[i] = yp[i - 1] * y;
    }
    double* row = &L.V[p * static_cast<std::size_t>(L.dim)];
    std::size_t idx = 0;
    for (int t = 0; t <= degree; ++t)
      for (int b = 0; b <= t; ++b, ++idx) row[idx] = xp[t - b] * yp[b];
  }
  return L;
}

struct Candidate {
  int phi = std::numeric_limits<int>::max();   // ceil-cap overflow (certificate)
  int phi2 = std::numeric_limits<int>::max();  // floor-cap overflow (push odd points onto Z(f))
  double lambda = 0;
  bool better_than(const Candidate& o) const {
    if (phi != o.phi) return phi < o.phi;
    if (phi2 != o.phi2) return phi2 < o.phi2;
    return std::abs(lambda) < std::abs(o.lambda);
  }
};

class Search {
 public:
  Search(const std::vector<std::array<double, 2>>& points,
         const std::vector<std::vector<int>>& sets, int degree, const HamSandwichOptions& opts)
      : pts_(points), sets_(sets), opts_(opts), lift_(build_lift(points, degree)) {
    n_ = pts_.size();
    event_sign_.assign(n_, 0);
    membership_.assign(n_, -1);
    for (std::size_t s = 0; s < sets_.size(); ++s)
      for (int p : sets_[s]) {
        if (membership_[p] != -1)
          multi_.emplace_back(p, static_cast<int>(s));
        else
          membership_[p] = static_cast<int>(s);
      }
    registered_.clear();
    for (std::size_t p = 0; p < n_; ++p)
      if (membership_[p] >= 0) registered_.push_back(static_cast<int>(p));
    caps_ceil_.resize(sets_.size());
    caps_floor_.resize(sets_.size());
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      caps_ceil_[s] = (static_cast<int>(sets_[s].size()) + 1) / 2;
      caps_floor_[s] = static_cast<int>(sets_[s].size()) / 2;
    }
    if (opts_.steer_cells) {
      steer_of_.assign(n_, -1);
      for (std::size_t c = 0; c < opts_.steer_cells->size(); ++c)
        for (int p : (*opts_.steer_cells)[c]) steer_of_[p] = static_cast<int>(c);
    }
    vals_.assign(n_, 0.0);
    dirv_.assign(n_, 0.0);
    w_.assign(lift_.dim, 0.0);
  }

  std::optional<HamSandwichResult> run(int* best_imbalance_out) {
    Rng rng(opts_.seed);
    int best_imbalance = std::numeric_limits<int>::max();
    std::optional<HamSandwichResult> best;
    int certified_count = 0;
    int wanted = opts_.steer_cells ? std::max(1, opts_.keep_best_restarts) : 1;
    for (int restart = 0; restart < opts_.restarts && certified_count < wanted; ++restart) {
      init_state(rng);
      int stall = 0;
      bool certified = false;
      for (int it = 0; it < opts_.iters; ++it) {
        if (current_phi() == 0) {
          certified = true;
          if (current_phi2() == 0 || it > opts_.iters / 3) break;
        }
        if (!sweep_step(rng, false)) ++stall;
        else stall = 0;
        if (stall > 24) break;
      }
      certified = certified || current_phi() == 0;
      best_imbalance = std::min(best_imbalance, current_phi());
      if (!certified) continue;
      if (opts_.steer_cells)
        for (int it = 0; it < opts_.steer_iters; ++it) sweep_step(rng, true);
      auto res = finalize();
      if (!res) continue;
      ++certified_count;
      if (!best || res->max_piece < best->max_piece) best = std::move(res);
    }
    if (best_imbalance_out) *best_imbalance_out = best ? 0 : best_imbalance;
    return best;
  }

 private:
  void init_state(Rng& rng) {
    for (double& c : w_) c = rng.gaussian();
    // center the hyperplane: constant term at the median level of the
    // registered points
    recompute_vals();
    if (!registered_.empty()) {
      std::vector<double> lv;
      lv.reserve(registered_.size());
      for (int p : registered_) lv.push_back(vals_[p]);
      std::nth_element(lv.begin(), lv.begin() + lv.size() / 2, lv.end());
      w_[0] -= lv[lv.size() / 2];
      recompute_vals();
    }
    moves_since_refresh_ = 0;
  }

  void recompute_vals() {
    for (std::size_t p = 0; p < n_; ++p) {
      const double* row = lift_.row(p);
      double acc = 0;
      for (int k = 0; k < lift_.dim; ++k) acc += w_[k] * row[k];
      vals_[p] = acc;
    }
  }

  int sign_of(double v) const { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

  void counts_at(double lambda, std::vector<int>& pos, std::vector<int>& neg) const {
    pos.assign(sets_.size(), 0);
    neg.assign(sets_.size(), 0);
    for (int p : registered_) {
      int s = sign_of(vals_[p] + lambda * dirv_[p]);
      if (s > 0) ++pos[membership_[p]];
      else if (s < 0) ++neg[membership_[p]];
    }
    for (auto [p, set] : multi_) {
      int s = sign_of(vals_[p] + lambda * dirv_[p]);
      if (s > 0) ++pos[set];
      else if (s < 0) ++neg[set];
    }
  }

  int phi_of(const std::vector<int>& pos, const std::vector<int>& neg,
             const std::vector<int>& caps) const {
    int total = 0;
    for (std::size_t s = 0; s < sets_.size(); ++s)
      total += std::max(0, pos[s] - caps[s]) + std::max(0, neg[s] - caps[s]);
    return total;
  }

  int current_phi() {
    counts_at(0.0, tmp_pos_, tmp_neg_);
    return phi_of(tmp_pos_, tmp_neg_, caps_ceil_);
  }
  int current_phi2() {
    counts_at(0.0, tmp_pos_, tmp_neg_);
    return phi_of(tmp_pos_, tmp_neg_, caps_floor_);
  }

  /// max over steering cells of the bigger side of the split at lambda
  /// (band-less; zeros count as neither).
  int steer_objective(double lambda) const {
    if (!opts_.steer_cells) return 0;
    std::vector<int> cpos(opts_.steer_cells->size(), 0), cneg(opts_.steer_cells->size(), 0);
    for (std::size_t p = 0; p < n_; ++p) {
      int c = steer_of_[p];
      if (c < 0) continue;
      int s = sign_of(vals_[p] + lambda * dirv_[p]);
      if (s > 0) ++cpos[c];
      else if (s < 0) ++cneg[c];
    }
    int worst = 0;
    for (std::size_t c = 0; c < cpos.size(); ++c)
      worst = std::max(worst, std::max(cpos[c], cneg[c]));
    return worst;
  }

  bool sweep_step(Rng& rng, bool steer_phase) {
    // direction: sparse in the lifted coefficients, occasionally dense
    dir_w_.resize(w_.size());
    std::fill(dir_w_.begin(), dir_w_.end(), 0.0);
    bool dense = (rng.below(8) == 0);
    if (dense) {
      for (double& c : dir_w_) c = rng.gaussian();
    } else {
      int nnz = 1 + static_cast<int>(rng.below(3));
      for (int k = 0; k < nnz; ++k) dir_w_[rng.below(w_.size())] = rng.gaussian();
      if (rng.below(2) == 0) dir_w_[0] = rng.gaussian();  // offset moves are cheap wins
    }
    for (std::size_t p = 0; p < n_; ++p) {
      const double* row = lift_.row(p);
      double acc = 0;
      if (dense)
        for (int k = 0; k < lift_.dim; ++k) acc += dir_w_[k] * row[k];
      else
        for (std::size_t k = 0; k < dir_w_.size(); ++k)
          if (dir_w_[k] != 0.0) acc += dir_w_[k] * row[k];
      dirv_[p] = acc;
    }

    // events: registered points whose sign flips along the direction
    events_.clear();
    for (int p : registered_)
      if (std::abs(dirv_[p]) > 1e-300) events_.push_back({-vals_[p] / dirv_[p], p});
    std::sort(events_.begin(), events_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double lambda0 = events_.empty() ? 0.0 : events_.front().first - 1.0;
    counts_at(lambda0, pos_, neg_);
    int phi = phi_of(pos_, neg_, caps_ceil_);
    int phi2 = phi_of(pos_, neg_, caps_floor_);

    Candidate best{phi, phi2, lambda0};
    if (steer_phase && phi == 0) steer_candidates_.assign(1, lambda0);
    else steer_candidates_.clear();

    auto set_delta = [&](int p, int delta_sign, int count_delta) {
      int s = membership_[p];
      if (s >= 0) {
        if (delta_sign > 0) pos_[s] += count_delta;
        else neg_[s] += count_delta;
      }
      for (auto [mp, ms] : multi_)
        if (mp == p) {
          if (delta_sign > 0) pos_[ms] += count_delta;
          else neg_[ms] += count_delta;
        }
    };

    std::size_t i = 0;
    while (i < events_.size()) {
      std::size_t j = i;
      double lam = events_[i].first;
      while (j < events_.size() && events_[j].first == lam) ++j;
      // at lam the group's points lie on the hyperplane: remove them.
      // sign just before the root of vals + lambda*dirv is -sign(dirv).
      for (std::size_t k = i; k < j; ++k) {
        int p = events_[k].second;
        int s_before = (dirv_[p] > 0) ? -1 : 1;
        set_delta(p, s_before, -1);
        event_sign_[p] = s_before;
      }
      int phi_at = phi_of(pos_, neg_, caps_ceil_);
      int phi2_at = phi_of(pos_, neg_, caps_floor_);
      Candidate at{phi_at, phi2_at, lam};
      if (at.better_than(best)) best = at;
      if (steer_phase && phi_at == 0) steer_candidates_.push_back(lam);
      // past lam: group points take the opposite sign
      for (std::size_t k = i; k < j; ++k) {
        int p = events_[k].second;
        set_delta(p, -event_sign_[p], +1);
      }
      double next_lam = (j < events_.size()) ? events_[j].first : lam + 2.0;
      double mid = 0.5 * (lam + next_lam);
      int phi_mid = phi_of(pos_, neg_, caps_ceil_);
      int phi2_mid = phi_of(pos_, neg_, caps_floor_);
      Candidate m{phi_mid, phi2_mid, mid};
      if (m.better_than(best)) best = m;
      if (steer_phase && phi_mid == 0) steer_candidates_.push_back(mid);
      i = j;
    }

    Candidate current{current_phi(), current_phi2(), 0.0};
    if (steer_phase) {
      if (steer_candidates_.empty()) return false;
      // evaluate the split quality on a bounded sample of certified candidates
      int cur_obj = steer_objective(0.0);
      double best_lam = 0.0;
      int best_obj = cur_obj;
      std::size_t stride = std::max<std::size_t>(1, steer_candidates_.size() / 24);
      for (std::size_t c = 0; c < steer_candidates_.size(); c += stride) {
        int obj = steer_objective(steer_candidates_[c]);
        if (obj < best_obj) {
          best_obj = obj;
          best_lam = steer_candidates_[c];
        }
      }
      if (best_obj >= cur_obj || best_lam == 0.0) return false;
      apply_move(best_lam);
      return true;
    }

    if (!best.better_than(current)) return false;
    apply_move(best.lambda);
    return true;
  }

  void apply_move(double lambda) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] += lambda * dir_w_[k];
    for (std::size_t p = 0; p < n_; ++p) vals_[p] += lambda * dirv_[p];
    if (++moves_since_refresh_ >= 48) {
      recompute_vals();
      moves_since_refresh_ = 0;
    }
  }

  std::optional<HamSandwichResult> finalize() {
    // non-constant part must survive; otherwise the factor degenerates
    double hi = 0;
    for (std::size_t k = 1; k < w_.size(); ++k) hi = std::max(hi, std::abs(w_[k]));
    if (hi < 1e-12 * std::max(1.0, std::abs(w_[0]))) return std::nullopt;

    PolyFactor in_norm;
    in_norm.degree = lift_.degree;
    in_norm.coeffs = w_;
    PolyFactor factor = compose_affine(in_norm, lift_.cx, lift_.cy, lift_.sx, lift_.sy);
    factor.normalize(opts_.tol);

    HamSandwichResult res;
    res.factor = std::move(factor);
    res.certificate = verify_bisection(res.factor, pts_, sets_);
    if (!res.certificate.holds) return std::nullopt;
    if (opts_.steer_cells) {
      std::vector<int> cpos(opts_.steer_cells->size(), 0), cneg(opts_.steer_cells->size(), 0);
      for (std::size_t p = 0; p < n_; ++p) {
        if (steer_of_[p] < 0) continue;
        int s = res.factor.sign_at(pts_[p][0], pts_[p][1]);
        if (s > 0) ++cpos[steer_of_[p]];
        else if (s < 0) ++cneg[steer_of_[p]];
      }
      for (std::size_t c = 0; c < cpos.size(); ++c)
        res.max_piece = std::max({res.max_piece, cpos[c], cneg[c]});
    }
    return res;
  }

  const std::vector<std::array<double, 2>>& pts_;
  const std::vector<std::vector<int>>& sets_;
  HamSandwichOptions opts_;
  Lift lift_;
  std::size_t n_ = 0;

  std::vector<int> membership_;
  std::vector<std::pair<int, int>> multi_;  // extra memberships (overlapping sets)
  std::vector<int> registered_;
  std::vector<int> caps_ceil_, caps_floor_;
  std::vector<int> steer_of_;

  std::vector<double> w_, dir_w_;
  std::vector<double> vals_, dirv_;
  std::vector<std::pair<double, int>> events_;
  std::vector<int> pos_, neg_, tmp_pos_, tmp_neg_;
  std::vector<double> steer_candidates_;
  std::vector<int> event_sign_;
  int moves_since_refresh_ = 0;
};

}  // namespace

BisectionCertificate verify_bisection(const PolyFactor& factor,
                                      const std::vector<std::array<double, 2>>& points,
                                      const std::vector<std::vector<int>>& sets) {
  BisectionCertificate cert;
  cert.set_sizes.reserve(sets.size());
  cert.holds = true;
  for (const auto& s : sets) {
    int pos = 0, neg = 0, zero = 0;
    for (int p : s) {
      int sg = factor.sign_at(points[p][0], points[p][1]);
      if (sg > 0) ++pos;
      else if (sg < 0) ++neg;
      else ++zero;
    }
    int cap = (static_cast<int>(s.size()) + 1) / 2;
    cert.set_sizes.push_back(static_cast<int>(s.size()));
    cert.pos.push_back(pos);
    cert.neg.push_back(neg);
    cert.zero.push_back(zero);
    if (pos > cap || neg > cap) cert.holds = false;
  }
  return cert;
}

HamSandwichResult polynomial_ham_sandwich(const std::vector<std::array<double, 2>>& points,
                                          const std::vector<std::vector<int>>& sets,
                                          int degree_budget, const HamSandwichOptions& opts) {
  if (degree_budget < 1) throw Error(Errc::InvalidInput, "degree budget must be >= 1");
  if (degree_budget > 48) throw Error(Errc::InvalidInput, "degree budget beyond supported range");
  if (static_cast<int>(sets.size()) > veronese_dim(degree_budget))
    throw Error(Errc::InfeasibleBudget,
                "budget degree " + std::to_string(degree_budget) + " can bisect at most " +
                    std::to_string(veronese_dim(degree_budget)) + " sets, got " +
                    std::to_string(sets.size()));
  for (const auto& s : sets)
    for (int p : s)
      if (p < 0 || p >= static_cast<int>(points.size()))
        throw Error(Errc::InvalidInput, "set references point out of range");

  Search search(points, sets, degree_budget, opts);
  int best_imbalance = 0;
  auto res = search.run(&best_imbalance);
  if (!res)
    throw Error(Errc::SearchFailure,
                "bisection search failed; best achieved imbalance " +
                    std::to_string(best_imbalance));
  return *res;
}

HamSandwichResult polynomial_ham_sandwich(
    const std::vector<std::vector<std::array<double, 2>>>& sets, int degree_budget,
    const HamSandwichOptions& opts) {
  std::vector<std::array<double, 2>> points;
  std::vector<std::vector<int>> idx(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (const auto& p : sets[s]) {
      idx[s].push_back(static_cast<int>(points.size()));
      points.push_back(p);
    }
  return polynomial_ham_sandwich(points, idx, degree_budget, opts);
}

}  // namespace udr
