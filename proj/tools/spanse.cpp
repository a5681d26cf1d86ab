// spanse: key generation, signing, verification and parameter analysis.
//
// Exit codes: 0 success/accept, 1 verification reject, 2 input or parse
// error, 3 internal failure.

#include <unistd.h>

#include <CLI11.hpp>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "spanse/analysis.hpp"
#include "spanse/codec.hpp"
#include "spanse/errors.hpp"
#include "spanse/params.hpp"
#include "spanse/random.hpp"
#include "spanse/scheme.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kInput = 2;
constexpr int kInternal = 3;

constexpr const char* kLiteral = "spanse-128-literal";

// Input problems the user can fix: bad paths, unreadable files.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

spanse::Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    spanse::Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw InputError("read failed: " + path);
    return data;
}

// Writes to a sibling temp file, then renames over the target so a failed
// run never leaves a partial file behind.
void write_file_atomic(const std::string& path, std::span<const std::uint8_t> data) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InputError("cannot rename onto " + path);
    }
}

void check_writable(const std::string& path) {
    fs::path parent = fs::path(path).parent_path();
    if (parent.empty()) parent = ".";
    if (!fs::is_directory(parent)) throw InputError("output directory does not exist: " + parent.string());
    if (fs::is_directory(path)) throw InputError("output path is a directory: " + path);
}

void check_readable(const std::string& path) {
    if (!fs::is_regular_file(path)) throw InputError("no such file: " + path);
}

spanse::ParameterSet resolve_params(const std::string& ref) {
    if (auto named = spanse::find_parameter_set(ref)) return *named;
    if (fs::is_regular_file(ref)) {
        auto data = read_file(ref);
        return spanse::deserialize_params(data);
    }
    throw InputError("unknown parameter set '" + ref + "' (see `spanse params list`)");
}

// Analysis also accepts "spanse-128-literal": n = 24000, k = 12000 with
// p = 101. That shape is not block-divisible, so it has no key generation
// counterpart; spanse-128 is the nearest divisible set.
struct AnalysisTarget {
    spanse::analysis::Dimensions dims;
    std::optional<spanse::ParameterSet> params;
    std::size_t header_bytes = 0;
};

AnalysisTarget resolve_analysis(const std::string& ref) {
    if (ref == kLiteral) return {spanse::analysis::literal_dimensions(), std::nullopt, 0};
    auto params = resolve_params(ref);
    return {spanse::analysis::Dimensions::of(params), params, spanse::framing_size(params)};
}

std::unique_ptr<spanse::RandomSource> make_rng(const std::optional<std::uint64_t>& seed) {
    if (seed) return std::make_unique<spanse::ShakeDrbg>(spanse::ShakeDrbg::from_seed(*seed));
    return std::make_unique<spanse::ShakeDrbg>(spanse::ShakeDrbg::from_entropy());
}

std::string fmt(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string sci(double v, int digits = 3) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(digits) << v;
    return os.str();
}

// ---- keygen / sign / verify ----

struct KeygenArgs {
    std::string params = "desk";
    std::string out_priv;
    std::string out_pub;
    std::optional<std::uint64_t> seed;
};

int cmd_keygen(const KeygenArgs& a) {
    auto params = resolve_params(a.params);
    params.validate();
    check_writable(a.out_priv);
    check_writable(a.out_pub);

    auto rng = make_rng(a.seed);
    auto kp = spanse::keygen(params, *rng);
    auto priv = spanse::serialize(kp.priv);
    auto pub = spanse::serialize(kp.pub);
    write_file_atomic(a.out_priv, priv);
    write_file_atomic(a.out_pub, pub);
    std::error_code ec;
    fs::remove(a.out_priv + ".used", ec);

    auto sizes = spanse::analysis::size_report(spanse::analysis::Dimensions::of(params), spanse::framing_size(params));
    std::cout << "public key: " << fmt(sizes.pk_symbols, 0) << " symbols, " << fmt(sizes.pk_packed_bytes, 0)
              << " bytes packed (" << fmt(sizes.pk_packed_kib, 1) << " KiB), " << pub.size() << " bytes on disk\n"
              << "private key: " << priv.size() << " bytes on disk\n"
              << "signature: " << sizes.sig_disk_bytes << " bytes on disk\n";
    return kOk;
}

struct SignArgs {
    std::string key;
    std::string message;
    std::string out;
    std::string mode = "randomized";
    std::optional<std::uint64_t> seed;
};

int cmd_sign(const SignArgs& a) {
    check_readable(a.key);
    check_readable(a.message);
    check_writable(a.out);
    auto sk = spanse::deserialize_private_key(read_file(a.key));
    auto msg = read_file(a.message);
    auto mode = a.mode == "deterministic" ? spanse::ThetaMode::deterministic : spanse::ThetaMode::randomized;

    const std::string marker = a.key + ".used";
    if (fs::exists(marker)) {
        std::cerr << "WARNING: " << a.key << " has already signed a message.\n"
                  << "WARNING: SPANSE keys are one-time; a second signature can leak the private key.\n";
    }

    auto rng = make_rng(a.seed);
    spanse::SignResult res;
    try {
        res = spanse::sign(sk, msg, mode, *rng);
    } catch (const spanse::SignError& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "hint: every attempt produced a zero entry; choose a density d(x) more concentrated on 0\n";
        return kInternal;
    }
    write_file_atomic(a.out, spanse::serialize(sk.params, res.signature));
    std::ofstream(marker) << "used\n";
    std::cout << "signed in " << res.attempts << (res.attempts == 1 ? " attempt\n" : " attempts\n");
    return kOk;
}

struct VerifyArgs {
    std::string pub;
    std::string message;
    std::string sig;
};

int cmd_verify(const VerifyArgs& a) {
    check_readable(a.pub);
    check_readable(a.message);
    check_readable(a.sig);
    auto pk = spanse::deserialize_public_key(read_file(a.pub));
    auto msg = read_file(a.message);
    auto sm = spanse::deserialize_signature(read_file(a.sig));
    if (!(sm.params == pk.params)) {
        std::cerr << "error: signature and public key use different parameters\n";
        return kInput;
    }
    auto status = spanse::verify(pk, msg, sm.signature);
    if (status == spanse::VerifyStatus::accept) {
        std::cout << "accept\n";
        return kOk;
    }
    if (status == spanse::VerifyStatus::parse) {
        std::cerr << "error: malformed signature\n";
        return kInput;
    }
    std::cout << "reject: " << spanse::to_string(status) << "\n";
    return kReject;
}

// ---- analyze ----

struct AnalyzeArgs {
    std::string params = kLiteral;
    bool as_json = false;
    std::optional<unsigned> b;
    std::optional<double> nu;
    std::optional<double> phi;
    std::optional<std::string> density;
    std::uint64_t monte_carlo = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

json cost_json(const spanse::analysis::CostReport& c) {
    return json{{"b", c.point.b},
                {"nu", c.point.nu},
                {"phi", c.point.phi},
                {"rho", c.rho},
                {"chi", c.chi},
                {"iteration_log2", c.iteration_log2},
                {"success_prob_log2", c.success_prob_log2},
                {"t_sdp_log2", c.t_sdp_log2},
                {"t_doom_log2", c.t_doom_log2}};
}

int cmd_analyze_attack(const AnalyzeArgs& a) {
    auto t = resolve_analysis(a.params);
    spanse::analysis::CostReport c;
    const bool fixed = a.b || a.nu || a.phi;
    if (fixed) {
        if (!(a.b && a.nu && a.phi)) throw InputError("--b, --nu and --phi must be given together");
        c = spanse::analysis::pge_ss_exponents({*a.b, *a.nu, *a.phi}, t.dims);
    } else {
        c = spanse::analysis::optimize_attack(t.dims);
    }
    auto bf = spanse::analysis::brute_force_log2(t.dims);
    if (a.as_json) {
        json j = cost_json(c);
        j["optimized"] = !fixed;
        j["brute_force_zero_free_log2"] = bf.zero_free_log2;
        j["brute_force_log2"] = bf.total_log2;
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << (fixed ? "PGE+SS cost at the given point\n" : "PGE+SS cost, optimized\n")
              << "  b = " << c.point.b << ", nu = " << fmt(c.point.nu, 6) << ", phi = " << fmt(c.point.phi, 6) << "\n"
              << "  rho = " << fmt(c.rho, 6) << ", chi = " << fmt(c.chi, 6) << "\n"
              << "  iteration cost 2^" << fmt(c.iteration_log2, 2) << ", success probability 2^"
              << fmt(c.success_prob_log2, 2) << "\n"
              << "  T_SDP  = 2^" << fmt(c.t_sdp_log2, 2) << "\n"
              << "  T_DOOM = 2^" << fmt(c.t_doom_log2, 2) << "  (assumes the sqrt(p) DOOM gain applies)\n"
              << "brute force: zero-free fraction 2^" << fmt(bf.zero_free_log2, 2) << ", overall 2^"
              << fmt(bf.total_log2, 2) << "\n";
    return kOk;
}

int cmd_analyze_rejection(const AnalyzeArgs& a) {
    auto t = resolve_analysis(a.params);
    spanse::DensityPolynomial density = a.density ? spanse::DensityPolynomial::parse(*a.density)
                                        : t.params ? t.params->density
                                                   : spanse::DensityPolynomial::binary(1, 1, 2);
    json j{{"density", density.to_string()}};
    std::ostringstream text;
    text << "density d(x) = " << density.to_string() << "\n";

    if (density.is_binary()) {
        auto m = spanse::analysis::rejection_rate_analytic(t.dims, density);
        j["analytic"] = {{"rho_c", m.rho_c},
                         {"rho_s", m.rho_s},
                         {"p_zero_entry", m.p_zero_entry},
                         {"p_valid", m.p_valid},
                         {"p_invalid", m.p_invalid},
                         {"expected_attempts", m.expected_attempts}};
        text << "analytic model\n"
             << "  rho_c = " << sci(m.rho_c) << ", rho_S = " << fmt(m.rho_s, 6) << "\n"
             << "  Pr[zero entry] = " << sci(m.p_zero_entry) << "\n"
             << "  p_valid = " << fmt(m.p_valid, 9) << ", rejection = " << sci(m.p_invalid) << "\n"
             << "  expected attempts = " << fmt(m.expected_attempts, 6) << "\n";
    } else {
        text << "analytic model: only defined for binary d(x); use --monte-carlo\n";
    }

    if (a.monte_carlo > 0) {
        if (!t.params) throw InputError("Monte Carlo needs a block-divisible parameter set (try spanse-128)");
        spanse::ParameterSet params = *t.params;
        params.density = density;
        params.validate();
        spanse::analysis::MonteCarloConfig cfg;
        cfg.trials = a.monte_carlo;
        cfg.seed = a.seed;
        cfg.threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
        auto mc = spanse::analysis::rejection_rate_montecarlo(params, density, cfg);
        j["monte_carlo"] = {{"trials", mc.trials},
                            {"valid", mc.valid},
                            {"p_valid", mc.p_valid},
                            {"rejection", mc.rejection_rate()},
                            {"stderr", mc.stderr_}};
        text << "Monte Carlo, " << mc.trials << " trials\n"
             << "  valid = " << mc.valid << ", p_valid = " << fmt(mc.p_valid, 6) << "\n"
             << "  rejection = " << sci(mc.rejection_rate()) << " +/- " << sci(mc.stderr_) << " (1 sigma)\n";
    }

    if (a.as_json) {
        // Flat aliases for the most used fields.
        if (j.contains("analytic")) {
            j["p_valid"] = j["analytic"]["p_valid"];
            j["expected_attempts"] = j["analytic"]["expected_attempts"];
        } else if (j.contains("monte_carlo")) {
            j["p_valid"] = j["monte_carlo"]["p_valid"];
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text.str();
    }
    return kOk;
}

int cmd_analyze_sizes(const AnalyzeArgs& a) {
    auto t = resolve_analysis(a.params);
    auto s = spanse::analysis::size_report(t.dims, t.header_bytes);
    if (a.as_json) {
        json j{{"pk_symbols", s.pk_symbols},
               {"pk_packed_bits", s.pk_packed_bits},
               {"pk_packed_bytes", s.pk_packed_bytes},
               {"pk_packed_kib", s.pk_packed_kib},
               {"pk_disk_bytes", s.pk_disk_bytes},
               {"sig_disk_bytes", s.sig_disk_bytes},
               {"log2_Ns", s.log2_ns},
               {"log2_Nc", s.log2_nc}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << "n = " << fmt(t.dims.n, 0) << ", k = " << fmt(t.dims.k, 0) << ", r = " << fmt(t.dims.r(), 0)
              << ", p = " << t.dims.p << ", q = " << t.dims.q << "\n"
              << "public key: " << fmt(s.pk_symbols, 0) << " symbols\n"
              << "  packed:  " << fmt(s.pk_packed_bytes, 0) << " bytes (" << fmt(s.pk_packed_kib, 1) << " KiB)\n"
              << "  on disk: " << s.pk_disk_bytes << " bytes\n"
              << "signature on disk: " << s.sig_disk_bytes << " bytes\n"
              << "syndromes N_s = 2^" << fmt(s.log2_ns, 2) << ", codewords N_c = 2^" << fmt(s.log2_nc, 2) << "\n";
    return kOk;
}

// ---- params ----

int cmd_params_list() {
    for (const auto& s : spanse::builtin_parameter_sets())
        std::cout << std::left << std::setw(20) << s.name << " " << s.description << "\n";
    std::cout << std::left << std::setw(20) << kLiteral << " analysis only: n=24000, k=12000, p=101 (not block-divisible)\n";
    return kOk;
}

int cmd_params_show(const std::string& ref, const std::optional<std::string>& out, bool as_json) {
    auto p = resolve_params(ref);
    p.validate();
    if (out) {
        check_writable(*out);
        write_file_atomic(*out, spanse::serialize(p));
    }
    if (as_json) {
        json j{{"q", p.q},   {"p", p.p},     {"n0", p.n0},   {"k0", p.k0},
               {"w", p.w},   {"w_g", p.w_g}, {"m_g", p.m_g}, {"n", p.n()},
               {"k", p.k()}, {"r", p.r()},   {"density", p.density.to_string()}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << "q = " << p.q << ", p = " << p.p << ", n0 = " << p.n0 << ", k0 = " << p.k0 << "\n"
              << "n = " << p.n() << ", k = " << p.k() << ", r = " << p.r() << "\n"
              << "w = " << p.w << ", w_g = " << p.w_g << ", m_g = " << p.m_g << "\n"
              << "d(x) = " << p.density.to_string() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPANSE one-time signatures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "spanse 1.0 (file format v" + std::to_string(spanse::kFormatVersion) + ")");

    int rc = kInternal;
    std::function<int()> action;

    KeygenArgs kg;
    auto* keygen = app.add_subcommand("keygen", "Generate a one-time key pair");
    keygen->add_option("--params", kg.params, "Parameter set name or params file")->capture_default_str();
    keygen->add_option("--out-priv", kg.out_priv, "Private key output")->required();
    keygen->add_option("--out-pub", kg.out_pub, "Public key output")->required();
    keygen->add_option("--seed", kg.seed, "Seed for reproducible keys");
    keygen->callback([&] { action = [&] { return cmd_keygen(kg); }; });

    SignArgs sg;
    auto* sign = app.add_subcommand("sign", "Sign a message (once per key)");
    sign->add_option("--key", sg.key, "Private key file")->required();
    sign->add_option("--message", sg.message, "Message file")->required();
    sign->add_option("--out", sg.out, "Signature output")->required();
    sign->add_option("--mode", sg.mode, "How Theta is chosen")
        ->check(CLI::IsMember({"deterministic", "randomized"}))
        ->capture_default_str();
    sign->add_option("--seed", sg.seed, "Seed for reproducible signatures");
    sign->callback([&] { action = [&] { return cmd_sign(sg); }; });

    VerifyArgs vf;
    auto* verify = app.add_subcommand("verify", "Verify a signature");
    verify->add_option("--pub", vf.pub, "Public key file")->required();
    verify->add_option("--message", vf.message, "Message file")->required();
    verify->add_option("--sig", vf.sig, "Signature file")->required();
    verify->callback([&] { action = [&] { return cmd_verify(vf); }; });

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Security and size analysis");
    analyze->require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--params", an.params, "Parameter set name, params file, or spanse-128-literal")->capture_default_str();
        sub->add_flag("--json", an.as_json, "Machine-readable output");
    };
    auto* attack = analyze->add_subcommand("attack", "PGE+SS attack cost");
    add_common(attack);
    attack->add_option("--b", an.b, "Merge tree depth")->check(CLI::PositiveNumber);
    attack->add_option("--nu", an.nu, "List size exponent");
    attack->add_option("--phi", an.phi, "Partial elimination fraction");
    attack->callback([&] { action = [&] { return cmd_analyze_attack(an); }; });

    auto* rejection = analyze->add_subcommand("rejection", "Signing rejection rate");
    add_common(rejection);
    rejection->add_option("--density", an.density, "d(x) as \"d0,d1[,i:di...]\"");
    rejection->add_option("--monte-carlo", an.monte_carlo, "Number of simulated signing attempts");
    rejection->add_option("--seed", an.seed, "Monte Carlo seed")->capture_default_str();
    rejection->add_option("--threads", an.threads, "Worker threads (0 = all cores)");
    rejection->callback([&] { action = [&] { return cmd_analyze_rejection(an); }; });

    auto* sizes = analyze->add_subcommand("sizes", "Key and signature sizes");
    add_common(sizes);
    sizes->callback([&] { action = [&] { return cmd_analyze_sizes(an); }; });

    auto* params = app.add_subcommand("params", "Built-in parameter sets");
    params->require_subcommand(1);
    auto* list = params->add_subcommand("list", "List built-in sets");
    list->callback([&] { action = [&] { return cmd_params_list(); }; });
    std::string show_ref;
    std::optional<std::string> show_out;
    bool show_json = false;
    auto* show = params->add_subcommand("show", "Show one set, optionally writing a params file");
    show->add_option("name", show_ref, "Set name or params file")->required();
    show->add_option("--out", show_out, "Write the set as a params file");
    show->add_flag("--json", show_json, "Machine-readable output");
    show->callback([&] { action = [&] { return cmd_params_show(show_ref, show_out, show_json); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        rc = action();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kInput;
    } catch (const spanse::ParseError& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        rc = kInput;
    } catch (const spanse::ParameterError& e) {
        std::cerr << "error: invalid parameters: " << e.what() << "\n";
        rc = kInput;
    } catch (const spanse::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        rc = kInternal;
    }
    return rc;
}
