#include "ssg/matching.hpp"

#include <cmath>

namespace ssg {

namespace {

constexpr double kFiveThirds = 5.0 / 3.0;
// Convergence thresholds for limit products; see limit_constants().
constexpr double kAnalyticLogEps = 1e-14;
constexpr double kHeuristicLogEps = 1e-15;
constexpr double kHeuristicProductFloor = 1e-14;
constexpr int kHeuristicCutoff = 10000;
constexpr int kAnalyticCutoff = 1000000;

void require_unit_interval(double x, const char* what) {
  if (!(x > 0.0) || !(x < 1.0)) {
    throw Error(Errc::bad_pair, std::string(what) + " must lie strictly between 0 and 1, got " +
                                    std::to_string(x));
  }
}

void require_term_index(int m) {
  if (m < 1) throw Error(Errc::bad_sequence, "term index must be at least 1");
}

}  // namespace

MatchingPair MatchingPair::from_rho(double rho) {
  require_unit_interval(rho, "rho");
  return MatchingPair{0.6 * (1.0 - rho), rho};
}

double MatchingPair::residual() const {
  return std::abs(kFiveThirds * r + rho - 1.0);
}

MatchingSequence MatchingSequence::constant(double rho) {
  require_unit_interval(rho, "rho");
  MatchingSequence s;
  s.family_ = Family::constant;
  s.c_ = rho;
  return s;
}

MatchingSequence MatchingSequence::geometric(double c, double q) {
  require_unit_interval(c, "c");
  if (!(q > 0.0) || q > 1.0) {
    throw Error(Errc::bad_pair, "geometric ratio q must lie in (0, 1]; q > 1 would eventually "
                                "push rho past 1");
  }
  MatchingSequence s;
  s.family_ = Family::geometric;
  s.c_ = c;
  s.q_ = q;
  return s;
}

MatchingSequence MatchingSequence::harmonic(double c) {
  require_unit_interval(c, "c");
  MatchingSequence s;
  s.family_ = Family::harmonic;
  s.c_ = c;
  return s;
}

MatchingSequence MatchingSequence::explicit_list(std::vector<double> rho,
                                                 std::optional<MatchingSequence> tail,
                                                 std::optional<double> declared_r_star) {
  if (rho.empty() && !tail) {
    throw Error(Errc::bad_sequence, "explicit sequence needs at least one term or a tail");
  }
  for (double x : rho) require_unit_interval(x, "rho");
  if (declared_r_star && (!(*declared_r_star >= 0.0) || !(*declared_r_star < 1.0))) {
    throw Error(Errc::bad_sequence, "declared limit product must lie in [0, 1)");
  }
  // Fold a finite explicit tail into the list so that finite() and
  // available_terms() stay truthful.
  if (tail && tail->family_ == Family::explicit_list && !tail->tail_) {
    if (!declared_r_star && tail->declared_r_star_) {
      double dropped = 1.0;
      for (double x : rho) dropped *= (1.0 - x);
      declared_r_star = dropped * *tail->declared_r_star_;
    }
    rho.insert(rho.end(), tail->list_.begin(), tail->list_.end());
    tail.reset();
  }
  MatchingSequence s;
  s.family_ = Family::explicit_list;
  s.list_ = std::move(rho);
  if (tail) s.tail_ = std::make_shared<const MatchingSequence>(std::move(*tail));
  s.declared_r_star_ = declared_r_star;
  return s;
}

double MatchingSequence::rho(int m) const {
  require_term_index(m);
  switch (family_) {
    case Family::constant:
      return c_;
    case Family::geometric:
      return c_ * std::pow(q_, m - 1 + shift_);
    case Family::harmonic:
      return c_ / static_cast<double>(m + shift_);
    case Family::explicit_list: {
      int len = static_cast<int>(list_.size());
      if (m <= len) return list_[m - 1];
      if (tail_) return tail_->rho(m - len);
      throw Error(Errc::sequence_exhausted,
                  "explicit sequence has " + std::to_string(len) + " terms; term " +
                      std::to_string(m) + " requested");
    }
  }
  throw Error(Errc::bad_sequence, "corrupt family tag");
}

MatchingPair MatchingSequence::pair(int m) const { return MatchingPair::from_rho(rho(m)); }

std::vector<MatchingPair> MatchingSequence::pairs(int m) const {
  if (m < 0) throw Error(Errc::bad_sequence, "pair count must be non-negative");
  std::vector<MatchingPair> out;
  out.reserve(m);
  for (int k = 1; k <= m; ++k) out.push_back(pair(k));
  return out;
}

std::vector<ScalePair> MatchingSequence::scale_pairs(int m) const {
  std::vector<ScalePair> out;
  out.reserve(m);
  for (const MatchingPair& p : pairs(m)) out.push_back(ScalePair{p.r, p.rho});
  return out;
}

int MatchingSequence::available_terms() const {
  if (finite()) return static_cast<int>(list_.size());
  return std::numeric_limits<int>::max();
}

MatchingSequence MatchingSequence::shift(int n) const {
  if (n < 0) throw Error(Errc::bad_sequence, "shift must be non-negative");
  if (n == 0) return *this;
  switch (family_) {
    case Family::constant:
      return *this;
    case Family::geometric: {
      MatchingSequence s = *this;
      s.shift_ += n;
      double first = s.rho(1);
      require_unit_interval(first, "rho");  // cannot fail for q <= 1; keep the guard anyway
      return s;
    }
    case Family::harmonic: {
      MatchingSequence s = *this;
      s.shift_ += n;
      return s;
    }
    case Family::explicit_list: {
      int len = static_cast<int>(list_.size());
      if (n >= len && tail_) return tail_->shift(n - len);
      if (n >= len) {
        throw Error(Errc::sequence_exhausted, "cannot shift a " + std::to_string(len) +
                                                  "-term sequence by " + std::to_string(n));
      }
      std::optional<double> shifted_limit;
      if (declared_r_star_) {
        double dropped = 1.0;
        for (int k = 0; k < n; ++k) dropped *= (1.0 - list_[k]);
        shifted_limit = *declared_r_star_ / dropped;
      }
      std::vector<double> rest(list_.begin() + n, list_.end());
      std::optional<MatchingSequence> tail;
      if (tail_) tail = *tail_;
      return explicit_list(std::move(rest), std::move(tail), shifted_limit);
    }
  }
  throw Error(Errc::bad_sequence, "corrupt family tag");
}

namespace {

// True when sum rho_m provably diverges; decided without arithmetic for the
// closed-form families.
bool analytic_divergence(const MatchingSequence& seq, bool* known) {
  *known = true;
  switch (seq.family()) {
    case Family::constant:
    case Family::harmonic:
      return true;
    case Family::geometric:
      // q == 1 degenerates to the constant family.
      return seq.rho(2) == seq.rho(1);
    case Family::explicit_list:
      *known = false;
      return false;
  }
  *known = false;
  return false;
}

}  // namespace

LimitConstants limit_constants(const MatchingSequence& seq) {
  LimitConstants out;
  auto finish = [&out](double r_star, bool diverges) {
    out.r_star = r_star;
    out.diverges = diverges;
    out.rho0 = 1.0 - r_star;
    out.c_star = r_star > 0.0 ? 1.0 / r_star : std::numeric_limits<double>::infinity();
    return out;
  };

  if (seq.family() == Family::explicit_list) {
    if (seq.declared_r_star()) {
      double d = *seq.declared_r_star();
      return finish(d, d == 0.0);
    }
    if (!seq.finite()) {
      // Prefix times the tail's limit; divergence is the tail's call.
      int len = 0;
      double prefix_log = 0.0;
      while (true) {
        // Walk the list part only: rho(m) delegates to the tail after len terms.
        // available_terms() is INT_MAX here, so track the list by probing the
        // shifted structure instead: shift(k) returns the tail once k reaches
        // the list length.
        MatchingSequence probe = seq.shift(len);
        if (probe.family() != Family::explicit_list || probe.declared_r_star()) {
          LimitConstants tail = limit_constants(probe);
          if (tail.diverges) return finish(0.0, true);
          return finish(std::exp(prefix_log) * tail.r_star, false);
        }
        prefix_log += std::log1p(-seq.rho(len + 1));
        ++len;
      }
    }
    // Finite list, no declaration: numeric heuristic.
    double log_sum = 0.0;
    double last_increment = std::numeric_limits<double>::infinity();
    int terms = std::min(seq.available_terms(), kHeuristicCutoff);
    for (int m = 1; m <= terms; ++m) {
      last_increment = std::abs(std::log1p(-seq.rho(m)));
      log_sum -= last_increment;
      if (std::exp(log_sum) < kHeuristicProductFloor) return finish(0.0, true);
    }
    if (last_increment < kHeuristicLogEps) return finish(std::exp(log_sum), false);
    throw Error(Errc::undetermined_divergence,
                "cannot decide convergence of the partial products within " +
                    std::to_string(terms) + " explicit terms; declare a limit product or "
                    "attach a closed-form tail");
  }

  bool known = false;
  bool diverges = analytic_divergence(seq, &known);
  if (!known) throw Error(Errc::bad_sequence, "corrupt family tag");
  if (diverges) return finish(0.0, true);

  // Convergent closed form: accumulate log(1 - rho_m) until the increments
  // drop below 1e-14; the remaining tail is then far below every tolerance
  // used by the experiments.
  double log_sum = 0.0;
  for (int m = 1; m <= kAnalyticCutoff; ++m) {
    double inc = std::log1p(-seq.rho(m));
    log_sum += inc;
    if (std::abs(inc) < kAnalyticLogEps) return finish(std::exp(log_sum), false);
  }
  throw Error(Errc::undetermined_divergence,
              "limit product did not converge within 1e6 terms (ratio too close to 1)");
}

std::vector<DerivedScales> derive_prefix(const MatchingSequence& seq, int m) {
  require_term_index(m);
  LimitConstants lc = limit_constants(seq);
  std::vector<DerivedScales> rows;
  rows.reserve(m);
  double delta = 1.0;
  double big_p = 1.0;
  for (int k = 1; k <= m; ++k) {
    MatchingPair p = seq.pair(k);
    DerivedScales row;
    row.m = k;
    row.rho = p.rho;
    row.r = p.r;
    row.gamma = delta * p.rho;
    row.alpha = 1.0 - big_p;
    delta *= p.r;
    big_p *= (1.0 - p.rho);
    row.delta = delta;
    row.big_p = big_p;
    row.kappa = -std::log1p(-p.rho);
    row.eta = row.gamma / (1.0 - lc.r_star);
    rows.push_back(row);
  }
  return rows;
}

DerivedScales derive(const MatchingSequence& seq, int m) {
  return derive_prefix(seq, m).back();
}

double telescoping_residual(const MatchingSequence& seq, int m) {
  require_term_index(m);
  double delta = 1.0;
  double pow53 = 1.0;  // (5/3)^(i-1)
  double sum = 0.0;
  for (int i = 1; i <= m; ++i) {
    double rho_i = seq.rho(i);
    sum += pow53 * (delta * rho_i);
    delta *= 0.6 * (1.0 - rho_i);
    pow53 *= kFiveThirds;
  }
  return std::abs(sum + pow53 * delta - 1.0);
}

MatchingSequence project(const MatchingSequence& seq, int terms) {
  require_term_index(terms);
  LimitConstants lc = limit_constants(seq);
  std::vector<double> sigma;
  sigma.reserve(terms);
  if (lc.r_star == 0.0) {
    // sigma_m = rho_m P_(m-1) / (P_(m-1) - 0): divergent sequences are fixed
    // points, and copying keeps them fixed exactly.
    for (int m = 1; m <= terms; ++m) sigma.push_back(seq.rho(m));
  } else {
    // The gap P_(m-1) - R_* is differenced incrementally rather than formed
    // by fresh subtraction: gap and numerator then share their rounding
    // history, so downstream telescoped products (round trips, the energy
    // identity) cancel coherently instead of amplifying one ulp of P by
    // 1/gap.
    double big_p = 1.0;            // P_(m-1)
    double gap = 1.0 - lc.r_star;  // P_(m-1) - R_*
    for (int m = 1; m <= terms; ++m) {
      double rho_m = seq.rho(m);
      double num = rho_m * big_p;
      // The gap shrinks to the rounding floor as P approaches R_*; past it
      // (or if a declared limit exceeds the actual partial products) the
      // quotient is noise, not a projection.
      if (!(gap > 1e-15 * big_p) || !(num < gap)) {
        throw Error(Errc::bad_sequence,
                    "projection lost precision at term " + std::to_string(m) +
                        ": the partial product has reached its limit; request fewer terms");
      }
      sigma.push_back(num / gap);
      gap -= num;
      big_p *= (1.0 - rho_m);
    }
  }
  // Projected sequences are line-only: their own partial products tend to 0.
  return MatchingSequence::explicit_list(std::move(sigma), std::nullopt, 0.0);
}

MatchingSequence unproject(const MatchingSequence& seq, double rho0, int terms) {
  require_term_index(terms);
  require_unit_interval(rho0, "rho0");
  std::vector<double> rho;
  rho.reserve(terms);
  double a = 1.0;  // prod_(i<m) (1 - sigma_i)
  for (int m = 1; m <= terms; ++m) {
    double sigma_m = seq.rho(m);
    require_unit_interval(sigma_m, "sigma");
    rho.push_back(rho0 * a / (rho0 * a + 1.0 - rho0) * sigma_m);
    a *= (1.0 - sigma_m);
  }
  return MatchingSequence::explicit_list(std::move(rho), std::nullopt, 1.0 - rho0);
}

nlohmann::json MatchingSequence::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case Family::constant:
      j["family"] = "constant";
      j["rho"] = c_;
      break;
    case Family::geometric:
      j["family"] = "geometric";
      j["c"] = c_;
      j["q"] = q_;
      if (shift_ != 0) j["shift"] = shift_;
      break;
    case Family::harmonic:
      j["family"] = "harmonic";
      j["c"] = c_;
      if (shift_ != 0) j["shift"] = shift_;
      break;
    case Family::explicit_list:
      j["family"] = "explicit";
      j["rho"] = list_;
      if (tail_) j["tail"] = tail_->to_json();
      if (declared_r_star_) j["r_star"] = *declared_r_star_;
      break;
  }
  return j;
}

MatchingSequence MatchingSequence::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
    throw Error(Errc::bad_config, "sequence spec must be an object with a \"family\" key");
  }
  const std::string family = j.at("family").get<std::string>();
  auto number = [&j](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw Error(Errc::bad_config, std::string("sequence spec needs numeric \"") + key + "\"");
    }
    return j.at(key).get<double>();
  };
  int shift_terms = 0;
  if (j.contains("shift")) {
    if (!j.at("shift").is_number_integer() || j.at("shift").get<int>() < 0) {
      throw Error(Errc::bad_config, "\"shift\" must be a non-negative integer");
    }
    shift_terms = j.at("shift").get<int>();
  }
  if (family == "constant") return constant(number("rho")).shift(shift_terms);
  if (family == "geometric") return geometric(number("c"), number("q")).shift(shift_terms);
  if (family == "harmonic") return harmonic(number("c")).shift(shift_terms);
  if (family == "explicit") {
    if (!j.contains("rho") || !j.at("rho").is_array()) {
      throw Error(Errc::bad_config, "explicit sequence spec needs a \"rho\" array");
    }
    std::vector<double> rho;
    for (const auto& x : j.at("rho")) {
      if (!x.is_number()) throw Error(Errc::bad_config, "\"rho\" entries must be numbers");
      rho.push_back(x.get<double>());
    }
    std::optional<MatchingSequence> tail;
    if (j.contains("tail")) tail = from_json(j.at("tail"));
    std::optional<double> declared;
    if (j.contains("r_star")) {
      if (!j.at("r_star").is_number()) throw Error(Errc::bad_config, "\"r_star\" must be a number");
      declared = j.at("r_star").get<double>();
    }
    return explicit_list(std::move(rho), std::move(tail), declared);
  }
  throw Error(Errc::bad_config, "unknown sequence family \"" + family + "\"");
}

MatchingSequence MatchingSequence::parse(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::bad_config, "sequence spec is not valid JSON");
  return from_json(j);
}

}  // namespace ssg
