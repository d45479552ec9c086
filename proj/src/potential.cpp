#include "slspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

constexpr cplx kI{0.0, 1.0};

bool same_freq(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a));
}

// Largest |c| among the coefficient list, used for exact-zero tests.
double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

ExpPoly local_terms(PotentialKind kind, const Piece& piece) {
  std::vector<ExpTerm> out;
  switch (kind) {
    case PotentialKind::step:
      out.push_back({piece.coeffs.at(0), 0, 0.0});
      break;
    case PotentialKind::poly:
      for (std::size_t j = 0; j < piece.coeffs.size(); ++j)
        out.push_back({piece.coeffs[j], static_cast<int>(j), 0.0});
      break;
    case PotentialKind::trig: {
      out.push_back({piece.coeffs.at(0), 0, 0.0});
      const double a = piece.from;
      for (std::size_t j = 1; 2 * j - 1 < piece.coeffs.size(); ++j) {
        const cplx ca = piece.coeffs[2 * j - 1];
        const cplx cb = 2 * j < piece.coeffs.size() ? piece.coeffs[2 * j] : cplx{};
        const double w = static_cast<double>(j);
        // a cos(jt) + b sin(jt), t = from + s
        out.push_back({std::exp(kI * (w * a)) * (ca - kI * cb) / 2.0, 0, w});
        out.push_back({std::exp(-kI * (w * a)) * (ca + kI * cb) / 2.0, 0, -w});
      }
      break;
    }
  }
  ExpPoly e(std::move(out));
  e.compact();
  return e;
}

std::vector<cplx> map_coeffs(const std::vector<cplx>& c, cplx (*f)(cplx)) {
  std::vector<cplx> out(c.size());
  std::transform(c.begin(), c.end(), out.begin(), f);
  return out;
}

template <typename F>
PotentialSpec map_pieces(const PotentialSpec& p, F&& f) {
  std::vector<Piece> pieces = p.pieces();
  for (auto& pc : pieces) pc.coeffs = f(pc.coeffs);
  return PotentialSpec(p.kind(), std::move(pieces));
}

std::vector<cplx> poly_square(const std::vector<cplx>& c) {
  std::vector<cplx> out(2 * c.size() - 1);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out[i + j] += c[i] * c[j];
  return out;
}

// c0 + Σ a_j cos(jt) + b_j sin(jt)  ->  Σ_{j=-J..J} e_j e^{ijt}
std::vector<cplx> trig_to_exp(const std::vector<cplx>& c, std::size_t harmonics) {
  std::vector<cplx> e(2 * harmonics + 1);
  e[harmonics] = c.at(0);
  for (std::size_t j = 1; j <= harmonics; ++j) {
    const cplx a = 2 * j - 1 < c.size() ? c[2 * j - 1] : cplx{};
    const cplx b = 2 * j < c.size() ? c[2 * j] : cplx{};
    e[harmonics + j] = (a - kI * b) / 2.0;
    e[harmonics - j] = (a + kI * b) / 2.0;
  }
  return e;
}

std::vector<cplx> trig_square(const std::vector<cplx>& c) {
  const std::size_t h = c.size() / 2;
  const auto e = trig_to_exp(c, h);
  const std::size_t h2 = 2 * h;
  std::vector<cplx> sq(2 * h2 + 1);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) sq[i + j] += e[i] * e[j];
  std::vector<cplx> out(2 * h2 + 1);
  out[0] = sq[h2];
  for (std::size_t j = 1; j <= h2; ++j) {
    out[2 * j - 1] = sq[h2 + j] + sq[h2 - j];
    out[2 * j] = kI * (sq[h2 + j] - sq[h2 - j]);
  }
  return out;
}

double parse_coordinate(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ParseError(where + ": expected a number or a string like \"pi/2\"");
  const std::string s = v.get<std::string>();
  static const std::regex re(R"(^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, re)) {
    const double num = m[1].matched ? std::stod(m[1].str()) : 1.0;
    const double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return num * kPi / den;
  }
  try {
    std::size_t pos = 0;
    const double d = std::stod(s, &pos);
    if (pos == s.size()) return d;
  } catch (const std::exception&) {
  }
  throw ParseError(where + ": cannot parse coordinate \"" + s + "\"");
}

}  // namespace

// ---------------------------------------------------------------- ExpPoly

cplx ExpPoly::operator()(double s) const {
  cplx acc{};
  for (const auto& t : terms_) {
    cplx v = t.coef;
    if (t.power > 0) v *= std::pow(s, t.power);
    if (t.freq != 0.0) v *= std::exp(kI * t.freq * s);
    acc += v;
  }
  return acc;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  compact();
  return *this;
}

ExpPoly& ExpPoly::operator*=(cplx c) {
  for (auto& t : terms_) t.coef *= c;
  compact();
  return *this;
}

ExpPoly operator*(const ExpPoly& lhs, const ExpPoly& rhs) {
  std::vector<ExpTerm> out;
  out.reserve(lhs.terms_.size() * rhs.terms_.size());
  for (const auto& a : lhs.terms_)
    for (const auto& b : rhs.terms_) out.push_back({a.coef * b.coef, a.power + b.power, a.freq + b.freq});
  ExpPoly r(std::move(out));
  r.compact();
  return r;
}

ExpPoly ExpPoly::conj() const {
  std::vector<ExpTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({std::conj(t.coef), t.power, -std::conj(t.freq)});
  return ExpPoly(std::move(out));
}

void ExpPoly::compact() {
  std::vector<ExpTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.coef == 0.0) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ExpTerm& o) { return o.power == t.power && same_freq(o.freq, t.freq); });
    if (it == out.end())
      out.push_back(t);
    else
      it->coef += t.coef;
  }
  std::erase_if(out, [](const ExpTerm& t) { return t.coef == 0.0; });
  terms_ = std::move(out);
}

ExpPoly ExpPoly::antiderivative(double span) const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    const int p = t.power;
    const cplx beta = t.freq;
    const double scale = std::abs(beta) * span;
    if (beta == 0.0) {
      out.push_back({t.coef / static_cast<double>(p + 1), p + 1, 0.0});
    } else if (scale < p + 1.0 || std::abs(beta) < 1e-4) {
      // Σ_k (iβ)^k / k! · s^{p+k+1} / (p+k+1)
      cplx c = t.coef;  // carries (iβ)^k / k!
      const cplx ib = kI * beta;
      double largest = 0.0;
      for (int k = 0; k < 200; ++k) {
        const cplx term = c / static_cast<double>(p + k + 1);
        const double mag = std::abs(term) * std::pow(span, p + k + 1);
        largest = std::max(largest, mag);
        out.push_back({term, p + k + 1, 0.0});
        if (k > scale && mag < 1e-18 * largest) break;
        c *= ib / static_cast<double>(k + 1);
      }
    } else {
      // e^{iβs} Σ_j (−1)^j p!/(p−j)! s^{p−j}/(iβ)^{j+1} − (−1)^p p!/(iβ)^{p+1}
      const cplx ib = kI * beta;
      cplx inv = t.coef / ib;  // c·(−1)^j p!/(p−j)!/(iβ)^{j+1}
      for (int j = 0; j <= p; ++j) {
        out.push_back({inv, p - j, beta});
        if (j < p) inv *= -static_cast<double>(p - j) / ib;
      }
      out.push_back({-inv, 0, 0.0});
    }
  }
  ExpPoly r(std::move(out));
  r.compact();
  return r;
}

// ---------------------------------------------------------------- kinds

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::step: return "step";
    case PotentialKind::poly: return "poly";
    case PotentialKind::trig: return "trig";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "step") return PotentialKind::step;
  if (s == "poly" || s == "polynomial") return PotentialKind::poly;
  if (s == "trig") return PotentialKind::trig;
  throw ParseError("unknown potential kind \"" + s + "\" (expected step|poly|trig)");
}

// ---------------------------------------------------------------- PotentialSpec

PotentialSpec::PotentialSpec(PotentialKind kind, std::vector<Piece> pieces)
    : kind_(kind), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("potential has no pieces");
  constexpr double snap = 1e-9;
  if (std::abs(pieces_.front().from) > snap) {
    std::ostringstream os;
    os << "partition must start at 0, first breakpoint is " << pieces_.front().from;
    throw DomainError(os.str());
  }
  pieces_.front().from = 0.0;
  if (std::abs(pieces_.back().to - kPi) > snap) {
    std::ostringstream os;
    os.precision(17);
    os << "partition must end at pi, last breakpoint is " << pieces_.back().to;
    throw DomainError(os.str());
  }
  pieces_.back().to = kPi;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto& pc = pieces_[i];
    if (!(pc.from < pc.to)) {
      std::ostringstream os;
      os << "piece " << i << " is empty or reversed: [" << pc.from << ", " << pc.to << "]";
      throw DomainError(os.str());
    }
    if (i > 0) {
      const double prev = pieces_[i - 1].to;
      if (std::abs(prev - pc.from) > snap) {
        std::ostringstream os;
        os.precision(17);
        os << (pc.from < prev ? "overlap" : "gap") << " at breakpoint " << prev << ": piece " << i
           << " starts at " << pc.from;
        throw DomainError(os.str());
      }
      pc.from = prev;
    }
    if (pc.coeffs.empty()) throw DomainError("piece " + std::to_string(i) + " has no coefficients");
    if (kind_ == PotentialKind::step && pc.coeffs.size() != 1)
      throw DomainError("step piece " + std::to_string(i) + " must carry exactly one coefficient");
    for (const auto& c : pc.coeffs)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw DomainError("piece " + std::to_string(i) + " has a non-finite coefficient");
  }
  local_.reserve(pieces_.size());
  for (const auto& pc : pieces_) local_.push_back(local_terms(kind_, pc));
}

PotentialSpec PotentialSpec::zero() { return constant(0.0); }

PotentialSpec PotentialSpec::constant(cplx c) {
  return PotentialSpec(PotentialKind::step, {{0.0, kPi, {c}}});
}

PotentialSpec PotentialSpec::step(double at, cplx height) {
  if (!(at > 0.0 && at < kPi)) throw DomainError("step location must lie strictly inside (0, pi)");
  return PotentialSpec(PotentialKind::step, {{0.0, at, {0.0}}, {at, kPi, {height}}});
}

PotentialSpec PotentialSpec::trig(std::vector<cplx> coeffs) {
  return PotentialSpec(PotentialKind::trig, {{0.0, kPi, std::move(coeffs)}});
}

PotentialSpec PotentialSpec::poly(std::vector<cplx> coeffs) {
  return PotentialSpec(PotentialKind::poly, {{0.0, kPi, std::move(coeffs)}});
}

std::vector<double> PotentialSpec::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].from);
  return out;
}

std::size_t PotentialSpec::piece_index(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& pc) { return v < pc.from; });
  const auto idx = static_cast<std::size_t>(std::distance(pieces_.begin(), it));
  return idx == 0 ? 0 : idx - 1;
}

bool PotentialSpec::is_real() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& pc) {
    return std::all_of(pc.coeffs.begin(), pc.coeffs.end(), [](cplx c) { return c.imag() == 0.0; });
  });
}

bool PotentialSpec::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& pc) { return max_abs(pc.coeffs) == 0.0; });
}

double PotentialSpec::sup_abs() const {
  // Crude but valid upper bound: Σ|coefficient|·(span^power) per piece.
  double best = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double span = pieces_[i].to - pieces_[i].from;
    double bound = 0.0;
    for (const auto& t : local_[i].terms()) bound += std::abs(t.coef) * std::pow(span, t.power);
    best = std::max(best, bound);
  }
  return best;
}

double PotentialSpec::l2_norm_sq() const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double span = pieces_[i].to - pieces_[i].from;
    const ExpPoly f = local_[i] * local_[i].conj();
    total += f.antiderivative(span)(span).real();
  }
  return total;
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << to_string(kind_) << "[";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << "; ";
    os << "[" << pieces_[i].from << "," << pieces_[i].to << "]:";
    for (std::size_t j = 0; j < pieces_[i].coeffs.size(); ++j) {
      const cplx c = pieces_[i].coeffs[j];
      os << (j ? "," : "") << c.real();
      if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
    }
  }
  os << "]";
  return os.str();
}

bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
  if (a.kind_ != b.kind_ || a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
    const auto& x = a.pieces_[i];
    const auto& y = b.pieces_[i];
    if (x.from != y.from || x.to != y.to || x.coeffs != y.coeffs) return false;
  }
  return true;
}

// ---------------------------------------------------------------- operations

cplx eval_u(const PotentialSpec& p, double x) {
  if (!(x >= 0.0 && x <= kPi)) {
    std::ostringstream os;
    os << "eval_u: x = " << x << " outside [0, pi]";
    throw DomainError(os.str());
  }
  const std::size_t i = p.piece_index(x);
  return p.local(i)(x - p.pieces()[i].from);
}

ExpPoly trig_kernel(cplx omega, double origin, TrigWeight weight) {
  // e^{±2iωt} = e^{±2iω·origin} e^{±2iωs}
  const cplx ep = std::exp(2.0 * kI * omega * origin);
  const cplx em = std::exp(-2.0 * kI * omega * origin);
  if (weight == TrigWeight::cos)
    return ExpPoly({{ep / 2.0, 0, 2.0 * omega}, {em / 2.0, 0, -2.0 * omega}});
  return ExpPoly({{ep / (2.0 * kI), 0, 2.0 * omega}, {-em / (2.0 * kI), 0, -2.0 * omega}});
}

namespace {

template <typename Kernel>
cplx piecewise_moment(const PotentialSpec& p, double a, double b, Kernel&& kernel) {
  if (!(a >= 0.0 && b <= kPi && a <= b)) {
    std::ostringstream os;
    os << "moment interval [" << a << ", " << b << "] not inside [0, pi]";
    throw DomainError(os.str());
  }
  cplx total{};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& pc = p.pieces()[i];
    const double lo = std::max(a, pc.from);
    const double hi = std::min(b, pc.to);
    if (!(lo < hi)) continue;
    const double span = pc.to - pc.from;
    const ExpPoly F = (p.local(i) * kernel(pc.from)).antiderivative(span);
    total += F(hi - pc.from) - F(lo - pc.from);
  }
  return total;
}

}  // namespace

cplx trig_moment(const PotentialSpec& p, cplx omega, double a, double b, TrigWeight weight) {
  return piecewise_moment(p, a, b, [&](double origin) { return trig_kernel(omega, origin, weight); });
}

cplx weighted_trig_moment(const PotentialSpec& p, cplx omega, double a, double b, TrigWeight weight) {
  return piecewise_moment(p, a, b, [&](double origin) {
    const ExpPoly lin({{kPi - origin, 0, 0.0}, {-1.0, 1, 0.0}});
    return lin * trig_kernel(omega, origin, weight);
  });
}

PotentialSpec conjugate(const PotentialSpec& p) {
  return map_pieces(p, [](const std::vector<cplx>& c) {
    return map_coeffs(c, [](cplx z) { return std::conj(z); });
  });
}

PotentialSpec real_part(const PotentialSpec& p) {
  return map_pieces(p, [](const std::vector<cplx>& c) {
    return map_coeffs(c, [](cplx z) { return cplx(z.real(), 0.0); });
  });
}

PotentialSpec imag_part(const PotentialSpec& p) {
  return map_pieces(p, [](const std::vector<cplx>& c) {
    return map_coeffs(c, [](cplx z) { return cplx(z.imag(), 0.0); });
  });
}

PotentialSpec square(const PotentialSpec& p) {
  switch (p.kind()) {
    case PotentialKind::step:
      return map_pieces(p, [](const std::vector<cplx>& c) { return std::vector<cplx>{c[0] * c[0]}; });
    case PotentialKind::poly:
      return map_pieces(p, poly_square);
    case PotentialKind::trig:
      return map_pieces(p, trig_square);
  }
  return p;
}

// ---------------------------------------------------------------- JSON

PotentialSpec parse_potential(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("potential JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("pieces"))
    throw ParseError("potential JSON must be an object with \"kind\" and \"pieces\"");
  if (!doc.at("kind").is_string()) throw ParseError("\"kind\" must be a string");
  const PotentialKind kind = potential_kind_from_string(doc.at("kind").get<std::string>());
  if (!doc.at("pieces").is_array()) throw ParseError("\"pieces\" must be an array");

  std::vector<Piece> pieces;
  std::size_t idx = 0;
  try {
    for (const auto& jp : doc.at("pieces")) {
      const std::string where = "piece " + std::to_string(idx++);
      if (!jp.contains("from") || !jp.contains("to") || !jp.contains("coeffs_re"))
        throw ParseError(where + ": needs \"from\", \"to\" and \"coeffs_re\"");
      Piece pc;
      pc.from = parse_coordinate(jp.at("from"), where + ".from");
      pc.to = parse_coordinate(jp.at("to"), where + ".to");
      const auto re = jp.at("coeffs_re").get<std::vector<double>>();
      std::vector<double> im(re.size(), 0.0);
      if (jp.contains("coeffs_im")) {
        im = jp.at("coeffs_im").get<std::vector<double>>();
        if (im.size() != re.size()) throw ParseError(where + ": coeffs_re and coeffs_im differ in length");
      }
      for (std::size_t j = 0; j < re.size(); ++j) pc.coeffs.emplace_back(re[j], im[j]);
      pieces.push_back(std::move(pc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("potential JSON: ") + e.what());
  }
  return PotentialSpec(kind, std::move(pieces));
}

PotentialSpec load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open potential file \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_potential(ss.str());
}

std::string potential_to_json(const PotentialSpec& p) {
  nlohmann::json doc;
  doc["kind"] = to_string(p.kind());
  doc["pieces"] = nlohmann::json::array();
  for (const auto& pc : p.pieces()) {
    std::vector<double> re;
    std::vector<double> im;
    for (const auto& c : pc.coeffs) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    doc["pieces"].push_back({{"from", pc.from}, {"to", pc.to}, {"coeffs_re", re}, {"coeffs_im", im}});
  }
  return doc.dump();
}

}  // namespace slspec
