#include "spanse/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "spanse/errors.hpp"
#include "spanse/field.hpp"
#include "spanse/random.hpp"

namespace spanse {

DensityPolynomial::DensityPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ParameterError("density polynomial has no terms");
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.symbol < b.symbol; });
    double sum = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].denominator == 0) throw ParameterError("density term with zero denominator");
        if (i && terms_[i].symbol == terms_[i - 1].symbol) throw ParameterError("duplicate density symbol");
        sum += terms_[i].probability();
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os.precision(12);
        os << "density coefficients sum to " << sum << ", not 1";
        throw ParameterError(os.str());
    }
    std::erase_if(terms_, [](const Term& t) { return t.numerator == 0; });
}

DensityPolynomial DensityPolynomial::binary(std::uint32_t num0, std::uint32_t num1, std::uint32_t den) {
    return DensityPolynomial({{0, num0, den}, {1, num1, den}});
}

DensityPolynomial DensityPolynomial::parse(std::string_view text) {
    struct Raw {
        unsigned symbol;
        std::uint64_t digits;
        unsigned scale;  // value = digits / 10^scale
    };
    std::vector<Raw> raw;
    unsigned position = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        start = end + 1;
        if (item.empty()) throw ParameterError("empty density entry");
        unsigned symbol = position++;
        if (auto colon = item.find(':'); colon != std::string_view::npos) {
            std::string sym(item.substr(0, colon));
            if (sym.empty() || sym.find_first_not_of("0123456789") != std::string::npos)
                throw ParameterError("bad density symbol '" + sym + "'");
            symbol = static_cast<unsigned>(std::stoul(sym));
            item = item.substr(colon + 1);
        }
        if (symbol > 255) throw ParameterError("density symbol above 255");
        std::uint64_t digits = 0;
        unsigned scale = 0;
        bool dot = false, any = false;
        for (char c : item) {
            if (c == '.' && !dot) {
                dot = true;
            } else if (c >= '0' && c <= '9') {
                if (digits > 100000000000ULL) throw ParameterError("density fraction has too many digits");
                digits = digits * 10 + static_cast<unsigned>(c - '0');
                any = true;
                if (dot) ++scale;
            } else {
                throw ParameterError("bad density fraction '" + std::string(item) + "'");
            }
        }
        if (!any) throw ParameterError("bad density fraction '" + std::string(item) + "'");
        raw.push_back({symbol, digits, scale});
        if (end == text.size()) break;
    }
    const unsigned scale = std::max_element(raw.begin(), raw.end(), [](auto& a, auto& b) { return a.scale < b.scale; })->scale;
    if (scale > 9) throw ParameterError("density fractions limited to 9 decimals");
    std::uint64_t den = 1;
    for (unsigned i = 0; i < scale; ++i) den *= 10;
    std::uint64_t total = 0;
    std::vector<Term> terms;
    for (const auto& r : raw) {
        std::uint64_t num = r.digits;
        for (unsigned i = r.scale; i < scale; ++i) num *= 10;
        total += num;
        terms.push_back({static_cast<std::uint8_t>(r.symbol), static_cast<std::uint32_t>(num), 0});
    }
    if (total == 0 || std::abs(static_cast<double>(total) / static_cast<double>(den) - 1.0) > 1e-3)
        throw ParameterError("density coefficients sum to " + std::to_string(static_cast<double>(total) / den) + ", not 1");
    if (total > 0xffffffffULL) throw ParameterError("density denominator overflows 32 bits");
    for (auto& t : terms) t.denominator = static_cast<std::uint32_t>(total);
    return DensityPolynomial(std::move(terms));
}

double DensityPolynomial::coefficient(unsigned symbol) const {
    for (const auto& t : terms_)
        if (t.symbol == symbol) return t.probability();
    return 0.0;
}

unsigned DensityPolynomial::max_symbol() const { return terms_.back().symbol; }

bool DensityPolynomial::is_binary() const { return max_symbol() <= 1; }

std::string DensityPolynomial::to_string() const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << t.probability();
        if (t.symbol == 1) os << "x";
        else if (t.symbol > 1) os << "x^" << unsigned{t.symbol};
    }
    return os.str();
}

DensitySampler::DensitySampler(const DensityPolynomial& d) {
    // Most likely symbols first so the linear scan exits early.
    std::vector<DensityPolynomial::Term> terms(d.terms().begin(), d.terms().end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.probability() > b.probability(); });
    long double cum = 0;
    for (const auto& t : terms) {
        cum += static_cast<long double>(t.numerator) / t.denominator;
        symbols_.push_back(t.symbol);
        thresholds_.push_back(static_cast<std::uint64_t>(std::min<long double>(cum, 1.0L) * 4294967296.0L));
    }
}

void DensitySampler::fill(RandomSource& rng, std::span<std::uint8_t> out) const {
    std::size_t i = 0;
    for (; i + 1 < out.size(); i += 2) {
        const std::uint64_t x = rng.next_u64();
        out[i] = pick(static_cast<std::uint32_t>(x));
        out[i + 1] = pick(static_cast<std::uint32_t>(x >> 32));
    }
    if (i < out.size()) out[i] = pick(static_cast<std::uint32_t>(rng.next_u64()));
}

void ParameterSet::validate() const {
    FieldParams field(q);
    auto fail = [](const std::string& what) { throw ParameterError("invalid parameter set: " + what); };
    if (p == 0) fail("p must be positive");
    if (k0 == 0 || k0 >= n0) fail("need 0 < k0 < n0");
    if (w == 0 || w > r()) fail("need 0 < w <= r");
    if (w >= q) fail("need w < q");
    if (w_g == 0 || w_g > n()) fail("need 1 <= w_g <= n");
    if (m_g > k()) fail("need m_g <= k");
    if (m_g >= q) fail("need m_g < q");
    if (density.max_symbol() >= q) fail("density symbol outside F_q");
    if (max_sign_attempts == 0) fail("max_sign_attempts must be positive");
    if (n() > 0xffffffffULL) fail("code length too large");
}

namespace {

const std::vector<NamedParameterSet>& registry() {
    static const std::vector<NamedParameterSet> sets = [] {
        std::vector<NamedParameterSet> v;
        v.push_back({"desk", "desk-scale test set (n=260, k=130)",
                     ParameterSet{127, 13, 20, 10, 6, 5, 4, DensityPolynomial::binary(1, 1, 2), 10000}});
        v.push_back({"desk-2x", "desk set with doubled block counts, same G density (n=520, k=260, w_g=10)",
                     ParameterSet{127, 13, 40, 20, 6, 10, 4, DensityPolynomial::binary(1, 1, 2), 10000}});
        v.push_back({"spanse-128",
                     "128-bit instance, block-divisible (n=24038, k=12019, p=101)",
                     ParameterSet{127, 101, 238, 119, 26, 11, 12, DensityPolynomial::binary(1, 1, 2), 10000}});
        return v;
    }();
    return sets;
}

}  // namespace

std::span<const NamedParameterSet> builtin_parameter_sets() { return registry(); }

std::optional<ParameterSet> find_parameter_set(std::string_view name) {
    for (const auto& s : registry())
        if (s.name == name) return s.params;
    return std::nullopt;
}

}  // namespace spanse
