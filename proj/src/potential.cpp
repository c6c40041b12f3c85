#include "threshold_lab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "threshold_lab/quadrature.hpp"

namespace tlab {

namespace {

constexpr double kEdgeTol = 1e-12;

// Antiderivative of x^n sin(w x + phi) (is_sin) or x^n cos(w x + phi),
// by the usual integration-by-parts recursion.
double trig_antideriv(int n, double w, double phi, bool is_sin, double x) {
    const double arg = w * x + phi;
    if (n == 0)
        return is_sin ? -std::cos(arg) / w : std::sin(arg) / w;
    const double xn = std::pow(x, n);
    if (is_sin)
        return -xn * std::cos(arg) / w + double(n) / w * trig_antideriv(n - 1, w, phi, false, x);
    return xn * std::sin(arg) / w - double(n) / w * trig_antideriv(n - 1, w, phi, true, x);
}

std::vector<double> poly_mul_linear(const std::vector<double>& p, double a, double c) {
    // p(x) * (a x + c)
    std::vector<double> r(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + 1] += p[i] * a;
        r[i] += p[i] * c;
    }
    return r;
}

void trim(std::vector<double>& p) {
    while (!p.empty() && p.back() == 0.0)
        p.pop_back();
}

} // namespace

// ---------------------------------------------------------------------------
// Harmonic / PotentialPiece

double Harmonic::eval(double x) const {
    const double arg = frequency * x + phase;
    return amplitude * (kind == HarmonicKind::Sin ? std::sin(arg) : std::cos(arg));
}

Harmonic Harmonic::derivative() const {
    // d/dx A sin(wx+phi) = A w cos(wx+phi); d/dx A cos = -A w sin
    Harmonic d;
    d.frequency = frequency;
    d.phase = phase;
    if (kind == HarmonicKind::Sin) {
        d.amplitude = amplitude * frequency;
        d.kind = HarmonicKind::Cos;
    } else {
        d.amplitude = -amplitude * frequency;
        d.kind = HarmonicKind::Sin;
    }
    return d;
}

double PotentialPiece::eval(double x) const {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;)
        v = v * x + poly[i];
    for (const auto& h : harmonics)
        v += h.eval(x);
    return v;
}

bool PotentialPiece::is_constant() const {
    for (std::size_t i = 1; i < poly.size(); ++i)
        if (poly[i] != 0.0)
            return false;
    for (const auto& h : harmonics)
        if (h.amplitude != 0.0 && h.frequency != 0.0)
            return false;
    return true;
}

double PotentialPiece::constant_value() const {
    double v = poly.empty() ? 0.0 : poly[0];
    for (const auto& h : harmonics)
        if (h.frequency == 0.0)
            v += h.eval(0.0);
    return v;
}

PotentialPiece PotentialPiece::derivative() const {
    PotentialPiece d;
    d.from = from;
    d.to = to;
    if (poly.size() > 1) {
        d.poly.resize(poly.size() - 1);
        for (std::size_t i = 1; i < poly.size(); ++i)
            d.poly[i - 1] = poly[i] * double(i);
    }
    for (const auto& h : harmonics)
        d.harmonics.push_back(h.derivative());
    return d;
}

PotentialPiece PotentialPiece::substituted(double a, double shift, double scale) const {
    PotentialPiece q;
    // q(x) = scale * p(a x + shift), so the new domain is the preimage of [from, to].
    const double x0 = (from - shift) / a;
    const double x1 = (to - shift) / a;
    q.from = std::min(x0, x1);
    q.to = std::max(x0, x1);

    if (!poly.empty()) {
        std::vector<double> r{poly.back()};
        for (std::size_t i = poly.size() - 1; i-- > 0;) {
            r = poly_mul_linear(r, a, shift);
            r[0] += poly[i];
        }
        for (double& c : r)
            c *= scale;
        trim(r);
        q.poly = std::move(r);
    }
    for (const auto& h : harmonics) {
        Harmonic m = h;
        m.amplitude = h.amplitude * scale;
        m.frequency = h.frequency * a;
        m.phase = h.frequency * shift + h.phase;
        q.harmonics.push_back(m);
    }
    return q;
}

double PotentialPiece::moment(int n, double lo, double hi) const {
    lo = std::max(lo, from);
    hi = std::min(hi, to);
    if (hi <= lo)
        return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const int m = n + int(i) + 1;
        total += poly[i] * (std::pow(hi, m) - std::pow(lo, m)) / double(m);
    }
    for (const auto& h : harmonics) {
        if (h.amplitude == 0.0)
            continue;
        if (std::abs(h.frequency) < 1e-300) {
            const double c = h.eval(0.0); // constant term
            total += c * (std::pow(hi, n + 1) - std::pow(lo, n + 1)) / double(n + 1);
            continue;
        }
        const bool is_sin = h.kind == HarmonicKind::Sin;
        total += h.amplitude * (trig_antideriv(n, h.frequency, h.phase, is_sin, hi) -
                                trig_antideriv(n, h.frequency, h.phase, is_sin, lo));
    }
    return total;
}

// ---------------------------------------------------------------------------
// PiecewisePotential

PiecewisePotential::PiecewisePotential(std::vector<PotentialPiece> pieces, double half_width)
    : pieces_(std::move(pieces)), b_(half_width) {
    if (!(b_ > 0.0))
        throw Error("PiecewisePotential: half-width b must be positive");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const PotentialPiece& a, const PotentialPiece& b) { return a.from < b.from; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.from < p.to))
            throw Error("PiecewisePotential: piece must have from < to");
        if (p.from < -b_ - kEdgeTol || p.to > b_ + kEdgeTol)
            throw Error("PiecewisePotential: pieces must lie within [-b, b]");
        if (i > 0 && p.from < pieces_[i - 1].to - kEdgeTol)
            throw Error("PiecewisePotential: pieces overlap");
    }
}

double PiecewisePotential::operator()(double x) const {
    for (const auto& p : pieces_) {
        if (x < p.from)
            break;
        if (x <= p.to)
            return p.eval(x);
    }
    return 0.0;
}

std::vector<double> PiecewisePotential::breakpoints() const {
    std::vector<double> cuts;
    for (const auto& p : pieces_) {
        cuts.push_back(p.from);
        cuts.push_back(p.to);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

double PiecewisePotential::limit_from_left(double x) const {
    for (const auto& p : pieces_)
        if (x > p.from + kEdgeTol && x <= p.to + kEdgeTol)
            return p.eval(std::min(x, p.to));
    return 0.0;
}

double PiecewisePotential::limit_from_right(double x) const {
    for (const auto& p : pieces_)
        if (x >= p.from - kEdgeTol && x < p.to - kEdgeTol)
            return p.eval(std::max(x, p.from));
    return 0.0;
}

bool PiecewisePotential::constant_on(double lo, double hi, double* value) const {
    const double mid = 0.5 * (lo + hi);
    for (const auto& p : pieces_) {
        if (mid >= p.from && mid <= p.to) {
            if (p.from > lo + kEdgeTol || p.to < hi - kEdgeTol)
                return false; // piece edge cuts through (lo, hi)
            if (!p.is_constant())
                return false;
            *value = p.constant_value();
            return true;
        }
        // a piece strictly inside (lo, hi) but missing mid
        if (p.from > lo + kEdgeTol && p.from < hi - kEdgeTol)
            return false;
        if (p.to > lo + kEdgeTol && p.to < hi - kEdgeTol)
            return false;
    }
    *value = 0.0;
    return true;
}

double PiecewisePotential::min_sampled(int samples_per_piece) const {
    double lowest = 0.0; // the potential is 0 outside its pieces
    for (const auto& p : pieces_) {
        for (int i = 0; i <= samples_per_piece; ++i) {
            const double x = p.from + (p.to - p.from) * double(i) / double(samples_per_piece);
            lowest = std::min(lowest, p.eval(x));
        }
    }
    return lowest;
}

// ---------------------------------------------------------------------------

double evaluate(const PiecewisePotential& p, double x) { return p(x); }

PiecewisePotential derivative(const PiecewisePotential& p, double tol) {
    // Structural W^1_2 check: the full function (pieces + zero outside) must be
    // continuous, in particular vanish at the support endpoints.
    std::vector<double> cuts = p.breakpoints();
    for (double x : cuts) {
        const double left = p.limit_from_left(x);
        const double right = p.limit_from_right(x);
        const double jump = std::abs(left - right);
        if (jump > tol * std::max({1.0, std::abs(left), std::abs(right)}))
            throw NotW12("potential is discontinuous (not in W^1_2) at x = " + std::to_string(x),
                         jump);
    }
    std::vector<PotentialPiece> pieces;
    pieces.reserve(p.pieces().size());
    for (const auto& piece : p.pieces())
        pieces.push_back(piece.derivative());
    return PiecewisePotential(std::move(pieces), p.b());
}

namespace {

std::pair<double, double> region_bounds(const PiecewisePotential& p, MomentRegion region) {
    switch (region) {
    case MomentRegion::NegativeHalf:
        return {-p.b(), 0.0};
    case MomentRegion::PositiveHalf:
        return {0.0, p.b()};
    case MomentRegion::Full:
    default:
        return {-p.b(), p.b()};
    }
}

} // namespace

double moment(const PiecewisePotential& p, int n, MomentRegion region) {
    auto [lo, hi] = region_bounds(p, region);
    double total = 0.0;
    for (const auto& piece : p.pieces())
        total += piece.moment(n, lo, hi);
    return total;
}

double moment_by_quadrature(const PiecewisePotential& p, int n, MomentRegion region,
                            double rtol) {
    auto [lo, hi] = region_bounds(p, region);
    auto f = [&p, n](double x) { return std::pow(x, n) * p(x); };
    return integrate(f, lo, hi, p.breakpoints(), rtol);
}

PiecewisePotential translated(const PiecewisePotential& p, double s) {
    std::vector<PotentialPiece> pieces;
    pieces.reserve(p.pieces().size());
    for (const auto& piece : p.pieces())
        pieces.push_back(piece.substituted(1.0, -s, 1.0)); // q(x) = p(x - s)
    return PiecewisePotential(std::move(pieces), p.b() + std::abs(s));
}

PiecewisePotential combined(const PiecewisePotential& a, const PiecewisePotential& b) {
    std::vector<double> cuts = a.breakpoints();
    for (double x : b.breakpoints())
        cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-15; }),
               cuts.end());

    auto piece_at = [](const PiecewisePotential& p, double x) -> const PotentialPiece* {
        for (const auto& piece : p.pieces())
            if (x >= piece.from && x <= piece.to)
                return &piece;
        return nullptr;
    };

    std::vector<PotentialPiece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double mid = 0.5 * (lo + hi);
        const PotentialPiece* pa = piece_at(a, mid);
        const PotentialPiece* pb = piece_at(b, mid);
        if (!pa && !pb)
            continue;
        PotentialPiece merged;
        merged.from = lo;
        merged.to = hi;
        for (const PotentialPiece* src : {pa, pb}) {
            if (!src)
                continue;
            if (merged.poly.size() < src->poly.size())
                merged.poly.resize(src->poly.size(), 0.0);
            for (std::size_t j = 0; j < src->poly.size(); ++j)
                merged.poly[j] += src->poly[j];
            merged.harmonics.insert(merged.harmonics.end(), src->harmonics.begin(),
                                    src->harmonics.end());
        }
        pieces.push_back(std::move(merged));
    }
    return PiecewisePotential(std::move(pieces), std::max(a.b(), b.b()));
}

PiecewisePotential scaled_by(const PiecewisePotential& p, double factor) {
    std::vector<PotentialPiece> pieces = p.pieces();
    for (auto& piece : pieces) {
        for (double& c : piece.poly)
            c *= factor;
        for (auto& h : piece.harmonics)
            h.amplitude *= factor;
    }
    return PiecewisePotential(std::move(pieces), p.b());
}

// ---------------------------------------------------------------------------
// ScalingFamily

double PowerLaw::at(double lambda) const { return c * std::pow(lambda, p); }

ScalingFamily ScalingFamily::constant(double alpha) {
    if (!(alpha > 0.0))
        throw Error("ScalingFamily: alpha must be positive");
    ScalingFamily f;
    f.kind_ = Kind::Const;
    f.alpha_ = alpha;
    return f;
}

ScalingFamily ScalingFamily::power(double c, double p) {
    if (!(c > 0.0))
        throw Error("ScalingFamily: power-law coefficient must be positive");
    ScalingFamily f;
    f.kind_ = Kind::Power;
    f.law_ = {c, p};
    return f;
}

ScalingFamily ScalingFamily::table(std::vector<std::pair<double, double>> rows) {
    if (rows.size() < 2)
        throw Error("ScalingFamily: table needs at least two rows");
    std::sort(rows.begin(), rows.end());
    for (const auto& [lam, alpha] : rows)
        if (!(lam > 0.0) || !(alpha > 0.0))
            throw Error("ScalingFamily: table entries must be positive");
    ScalingFamily f;
    f.kind_ = Kind::Table;
    f.rows_ = std::move(rows);
    return f;
}

ScalingFamily ScalingFamily::const_plus_power(double alpha, double c, double p) {
    if (!(alpha > 0.0))
        throw Error("ScalingFamily: alpha must be positive");
    if (!(p > 0.0))
        throw Error("ScalingFamily: const+power exponent must be positive (eps -> 0)");
    ScalingFamily f;
    f.kind_ = Kind::ConstPlusPower;
    f.alpha_ = alpha;
    f.law_ = {c, p};
    return f;
}

double ScalingFamily::alpha_at(double lambda) const {
    if (!(lambda > 0.0))
        throw Error("ScalingFamily: lambda must be positive");
    switch (kind_) {
    case Kind::Const:
        return alpha_;
    case Kind::Power:
        return law_.at(lambda);
    case Kind::ConstPlusPower: {
        const double a = alpha_ + law_.at(lambda);
        if (!(a > 0.0))
            throw Error("ScalingFamily: alpha_lambda <= 0 at lambda = " + std::to_string(lambda));
        return a;
    }
    case Kind::Table: {
        if (lambda < rows_.front().first || lambda > rows_.back().first)
            throw OutOfTable("lambda outside tabulated scaling range");
        auto it = std::lower_bound(rows_.begin(), rows_.end(), lambda,
                                   [](const auto& row, double l) { return row.first < l; });
        if (it->first == lambda)
            return it->second;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        // log-log linear interpolation
        const double t = (std::log(lambda) - std::log(lo.first)) /
                         (std::log(hi.first) - std::log(lo.first));
        return std::exp((1.0 - t) * std::log(lo.second) + t * std::log(hi.second));
    }
    }
    return alpha_;
}

LimitClass ScalingFamily::limit_class() const {
    switch (kind_) {
    case Kind::Const:
    case Kind::ConstPlusPower:
        return LimitClass::FinitePositive;
    case Kind::Power:
        if (law_.p < 0.0)
            return LimitClass::Infinite;
        if (law_.p > 0.0)
            return LimitClass::Zero;
        return LimitClass::FinitePositive;
    case Kind::Table: {
        // classify from the trend of the two smallest-lambda rows
        const auto& r0 = rows_[0];
        const auto& r1 = rows_[1];
        const double slope = (std::log(r1.second) - std::log(r0.second)) /
                             (std::log(r1.first) - std::log(r0.first));
        if (slope < -0.05)
            return LimitClass::Infinite;
        if (slope > 0.05)
            return LimitClass::Zero;
        return LimitClass::FinitePositive;
    }
    }
    return LimitClass::FinitePositive;
}

double ScalingFamily::limit() const {
    switch (kind_) {
    case Kind::Const:
    case Kind::ConstPlusPower:
        return alpha_;
    case Kind::Power:
        if (law_.p == 0.0)
            return law_.c;
        break;
    case Kind::Table:
        if (limit_class() == LimitClass::FinitePositive)
            return rows_.front().second;
        break;
    }
    throw Error("ScalingFamily: no finite positive limit");
}

std::optional<PowerLaw> ScalingFamily::epsilon() const {
    if (kind_ == Kind::ConstPlusPower)
        return law_;
    return std::nullopt;
}

std::optional<double> ScalingFamily::exponent() const {
    if (kind_ == Kind::Power)
        return law_.p;
    return std::nullopt;
}

std::string ScalingFamily::kind_name() const {
    switch (kind_) {
    case Kind::Const:
        return "const";
    case Kind::Power:
        return "power";
    case Kind::Table:
        return "table";
    case Kind::ConstPlusPower:
        return "const+power";
    }
    return "const";
}

PiecewisePotential scaled_potential(const PiecewisePotential& v, const ScalingFamily& f,
                                    double lambda) {
    if (lambda == 0.0)
        return PiecewisePotential({}, v.b());
    const double alpha = f.alpha_at(lambda);
    return scaled_potential_at(v, alpha, lambda * alpha);
}

PiecewisePotential scaled_potential_at(const PiecewisePotential& v, double alpha,
                                       double coupling, double origin) {
    if (!(alpha > 0.0))
        throw Error("scaled_potential: alpha must be positive");
    if (coupling == 0.0)
        return PiecewisePotential({}, v.b() / alpha + std::abs(origin));
    // x -> coupling * V(origin + alpha (x - origin)): substitution y = alpha x + shift
    const double shift = origin * (1.0 - alpha);
    std::vector<PotentialPiece> pieces;
    pieces.reserve(v.pieces().size());
    for (const auto& piece : v.pieces())
        pieces.push_back(piece.substituted(alpha, shift, coupling));
    double hull = 0.0;
    for (const auto& piece : pieces)
        hull = std::max({hull, std::abs(piece.from), std::abs(piece.to)});
    return PiecewisePotential(std::move(pieces), std::max(hull, v.b() / alpha));
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

namespace {

json piece_to_json(const PotentialPiece& p) {
    json harmonics = json::array();
    for (const auto& h : p.harmonics)
        harmonics.push_back({{"A", h.amplitude},
                             {"w", h.frequency},
                             {"phi", h.phase},
                             {"kind", h.kind == HarmonicKind::Sin ? "sin" : "cos"}});
    return {{"from", p.from}, {"to", p.to}, {"poly", p.poly}, {"harmonics", harmonics}};
}

PotentialPiece piece_from_json(const json& j) {
    PotentialPiece p;
    p.from = j.at("from").get<double>();
    p.to = j.at("to").get<double>();
    if (j.contains("poly"))
        p.poly = j.at("poly").get<std::vector<double>>();
    if (j.contains("harmonics")) {
        for (const auto& hj : j.at("harmonics")) {
            Harmonic h;
            h.amplitude = hj.at("A").get<double>();
            h.frequency = hj.at("w").get<double>();
            h.phase = hj.value("phi", 0.0);
            const std::string kind = hj.at("kind").get<std::string>();
            if (kind == "sin")
                h.kind = HarmonicKind::Sin;
            else if (kind == "cos")
                h.kind = HarmonicKind::Cos;
            else
                throw ConfigError("harmonic kind must be \"sin\" or \"cos\"");
            p.harmonics.push_back(h);
        }
    }
    return p;
}

} // namespace

PiecewisePotential potential_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        std::vector<PotentialPiece> pieces;
        if (j.contains("pieces"))
            for (const auto& pj : j.at("pieces"))
                pieces.push_back(piece_from_json(pj));
        return PiecewisePotential(std::move(pieces), j.at("b").get<double>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid potential JSON: ") + e.what());
    } catch (const Error&) {
        throw;
    }
}

std::string potential_to_json(const PiecewisePotential& p) {
    json pieces = json::array();
    for (const auto& piece : p.pieces())
        pieces.push_back(piece_to_json(piece));
    return json{{"b", p.b()}, {"pieces", pieces}}.dump();
}

ScalingFamily scaling_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "const")
            return ScalingFamily::constant(j.at("alpha").get<double>());
        if (kind == "power")
            return ScalingFamily::power(j.at("c").get<double>(), j.at("p").get<double>());
        if (kind == "const+power")
            return ScalingFamily::const_plus_power(j.at("alpha").get<double>(),
                                                   j.at("c").get<double>(),
                                                   j.at("p").get<double>());
        if (kind == "table") {
            std::vector<std::pair<double, double>> rows;
            for (const auto& row : j.at("rows"))
                rows.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
            return ScalingFamily::table(std::move(rows));
        }
        throw ConfigError("unknown scaling kind \"" + kind + "\"");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid scaling JSON: ") + e.what());
    }
}

std::string scaling_to_json(const ScalingFamily& f) {
    json j{{"kind", f.kind_name()}};
    switch (f.kind()) {
    case ScalingFamily::Kind::Const:
        j["alpha"] = f.limit();
        break;
    case ScalingFamily::Kind::Power:
        j["c"] = f.alpha_at(1.0);
        j["p"] = *f.exponent();
        break;
    case ScalingFamily::Kind::ConstPlusPower: {
        j["alpha"] = f.limit();
        j["c"] = f.epsilon()->c;
        j["p"] = f.epsilon()->p;
        break;
    }
    case ScalingFamily::Kind::Table: {
        json rows = json::array();
        for (const auto& [lam, alpha] : f.rows())
            rows.push_back({lam, alpha});
        j["rows"] = rows;
        break;
    }
    }
    return j.dump();
}

} // namespace tlab
