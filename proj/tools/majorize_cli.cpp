// Command-line front end: parse family/field JSON, dispatch to the solvers,
// emit certificates, reports and plot-ready CSV.
//
// Exit codes: 0 = affirmative verdict / success, 1 = negative verdict,
// 2 = input or solver error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "majorize/majorize.hpp"

namespace {

using majorize::Json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) majorize::fail(majorize::Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) majorize::fail(majorize::Errc::ParseError, "cannot write '" + path + "'");
    out << text;
}

Json load_json(const std::string& path) { return majorize::parse_json_text(read_file(path), path); }

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

void print_matrix(const majorize::DoublyStochastic& x) {
    for (std::size_t i = 0; i < x.dim(); ++i) {
        std::string line;
        for (std::size_t j = 0; j < x.dim(); ++j) {
            if (j) line += " ";
            line += fmt(x(i, j));
        }
        std::cout << line << "\n";
    }
}

struct Options {
    std::uint64_t seed = 0;
    double feas_rel = 1e-8;
    double cert_tol = 1e-6;

    majorize::WitnessOptions witness() const {
        majorize::WitnessOptions w;
        w.feas_rel = feas_rel;
        return w;
    }
};

int run_check(const Options& opt, const std::string& a_path, const std::string& b_path) {
    auto a = majorize::family_from_json(load_json(a_path), a_path);
    auto b = majorize::family_from_json(load_json(b_path), b_path);
    auto [ok, witness] = majorize::decide_joint_majorization(a, b, opt.seed, opt.witness());
    std::cout << "majorized: " << (ok ? "yes" : "no") << "\n";
    if (witness) {
        std::cout << "witness:\n";
        print_matrix(*witness);
    }
    return ok ? 0 : 1;
}

int run_certify(const Options& opt, const std::string& a_path, const std::string& b_path,
                const std::string& method, const std::string& out_path,
                const std::string& verify_path) {
    auto a = majorize::family_from_json(load_json(a_path), a_path);
    auto b = majorize::family_from_json(load_json(b_path), b_path);

    if (!verify_path.empty()) {
        auto cert = majorize::certificate_from_json(load_json(verify_path), verify_path);
        const double recomputed = majorize::mixture_residual(cert.mixture, a, b);
        std::cout << "stored residual:     " << fmt(cert.residual) << "\n";
        std::cout << "recomputed residual: " << fmt(recomputed) << "\n";
        const bool match = std::abs(recomputed - cert.residual) <= 1e-12;
        std::cout << "verify: " << (match ? "ok" : "mismatch") << "\n";
        return match ? 0 : 1;
    }

    majorize::EigenColumns ea = majorize::joint_diagonalize(a, opt.seed);
    majorize::EigenColumns eb = majorize::joint_diagonalize(b, opt.seed);
    auto witness = majorize::find_ds_witness(ea, eb, std::nullopt, opt.witness());
    if (!witness) {
        std::cout << "majorized: no\n";
        return 1;
    }

    std::optional<majorize::UnitaryMixture> mixture;
    std::string construction;
    if (method == "birkhoff") {
        mixture = majorize::mixture_from_ds(*witness, ea, eb);
        construction = "birkhoff";
    } else if (method == "ttransform") {
        if (a.size() != 1)
            majorize::fail(majorize::Errc::InvalidArgument,
                           "ttransform certificates need m = 1");
        auto chain = majorize::t_transform_chain(ea.column(0), eb.column(0));
        mixture = majorize::conjugate_mixture(chain.mixture, ea.diagonalizer(),
                                              eb.diagonalizer());
        construction = "ttransform";
    } else {
        majorize::fail(majorize::Errc::InvalidArgument, "unknown method '" + method + "'");
    }

    const double residual = majorize::mixture_residual(*mixture, a, b);
    write_file(out_path,
               majorize::certificate_to_json(*mixture, residual, construction).dump(2) + "\n");
    std::cout << "certificate: " << out_path << "\n";
    std::cout << "terms: " << mixture->terms() << "\n";
    std::cout << "residual: " << fmt(residual) << "\n";
    if (residual > opt.cert_tol) {
        std::cout << "residual exceeds cert tolerance " << fmt(opt.cert_tol) << "\n";
        return 2;
    }
    return 0;
}

int run_field_check(const Options& opt, const std::string& a_path, const std::string& b_path,
                    bool continuation) {
    auto a = majorize::field_from_json(load_json(a_path), a_path);
    auto b = majorize::field_from_json(load_json(b_path), b_path);
    auto result = majorize::pointwise_majorization_check(a, b, opt.seed, opt.witness());
    std::cout << "points: " << a.points() << "\n";
    std::cout << "pointwise majorized (proof): " << (result.majorized ? "yes" : "no") << "\n";
    if (!result.majorized) {
        std::cout << "failing points:";
        for (std::size_t k : result.failures)
            std::cout << " " << fmt(a.space().coordinate(k));
        std::cout << "\n";
        return 1;
    }
    if (continuation) {
        auto probe = majorize::continuation_ds_probe(a, b, opt.seed, nullptr, opt.witness());
        std::cout << "continuation probe (heuristic evidence):\n";
        std::cout << "max_jump: " << fmt(probe.max_jump) << "\n";
        std::cout << "jump_between: " << fmt(a.space().coordinate(probe.jump_from)) << " "
                  << fmt(a.space().coordinate(probe.jump_to)) << "\n";
    }
    return 0;
}

int run_field_certify(const Options& opt, const std::string& a_path, const std::string& b_path,
                      double epsilon, const std::string& out_path,
                      const std::string& verify_path) {
    auto a = majorize::field_from_json(load_json(a_path), a_path);
    auto b = majorize::field_from_json(load_json(b_path), b_path);

    if (!verify_path.empty()) {
        auto data = majorize::mixture_field_from_json(load_json(verify_path), verify_path);
        const double recomputed = majorize::field_mixture_residual(data.mixture, a, b);
        std::cout << "stored residual:     " << fmt(data.residual) << "\n";
        std::cout << "recomputed residual: " << fmt(recomputed) << "\n";
        const bool match = std::abs(recomputed - data.residual) <= 1e-12;
        std::cout << "verify: " << (match ? "ok" : "mismatch") << "\n";
        return match ? 0 : 1;
    }

    auto result = majorize::approx_hull_membership(a, b, epsilon, opt.seed, opt.witness());
    write_file(out_path, majorize::mixture_field_to_json(result.mixture,
                                                         result.achieved_residual, "field-approx")
                                 .dump(2) +
                             "\n");
    std::cout << "certificate: " << out_path << "\n";
    std::cout << "terms: " << result.mixture.terms() << "\n";
    std::cout << "cells: " << result.mixture.cells().size() << "\n";
    std::cout << "residual: " << fmt(result.achieved_residual) << "\n";
    std::cout << "residual bound (4*epsilon): " << fmt(4.0 * epsilon) << "\n";
    return result.achieved_residual <= 4.0 * epsilon ? 0 : 2;
}

int run_decompose(const std::string& x_path, const std::string& out_path) {
    auto x = majorize::ds_from_json(load_json(x_path), x_path);
    auto terms = majorize::birkhoff_decompose(x);
    const double err = majorize::birkhoff_reconstruction_error(terms, x);
    Json j;
    Json list = Json::array();
    for (const auto& t : terms) {
        Json item;
        item["weight"] = t.weight;
        Json perm = Json::array();
        for (std::size_t i = 0; i < t.permutation.dim(); ++i) perm.push_back(t.permutation(i));
        item["permutation"] = std::move(perm);
        list.push_back(std::move(item));
    }
    j["terms"] = std::move(list);
    j["reconstruction_error"] = err;
    if (!out_path.empty()) write_file(out_path, j.dump(2) + "\n");
    std::cout << "terms: " << terms.size() << "\n";
    for (const auto& t : terms) {
        std::string line = "  " + fmt(t.weight) + " * (";
        for (std::size_t i = 0; i < t.permutation.dim(); ++i) {
            if (i) line += " ";
            line += std::to_string(t.permutation(i));
        }
        std::cout << line << ")\n";
    }
    std::cout << "reconstruction_error: " << fmt(err) << "\n";
    return 0;
}

int run_unistochastic3(const std::string& x_path) {
    auto x = majorize::ds_from_json(load_json(x_path), x_path);
    const bool ok = majorize::unistochastic3_check(x);
    std::cout << "unistochastic: " << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
}

int run_demo(const Options& opt, const std::string& name, double step, double epsilon,
             const std::string& out_dir) {
    majorize::DemoReport report = majorize::demo_counterexamples(name, step, opt.seed, epsilon);
    std::filesystem::create_directories(out_dir);
    const std::string report_path = out_dir + "/report.json";
    const std::string csv_path = out_dir + "/series.csv";
    write_file(report_path, majorize::demo_report_to_json(report).dump(2) + "\n");
    write_file(csv_path, majorize::demo_csv(report));
    std::cout << "report: " << report_path << "\n";
    std::cout << "series: " << csv_path << "\n";
    if (report.ran_pair) {
        std::cout << "pointwise majorized (proof): " << (report.pointwise_all ? "yes" : "no")
                  << "\n";
        std::cout << "max_jump (heuristic evidence): " << fmt(report.max_jump) << " between "
                  << fmt(report.jump_from_x) << " and " << fmt(report.jump_to_x) << "\n";
        std::cout << "certificate residual at epsilon " << fmt(report.epsilon) << ": "
                  << fmt(report.cert_residual) << "\n";
    }
    if (report.ran_witness_field) {
        std::size_t non_us = 0;
        for (int v : report.us3_ok) non_us += static_cast<std::size_t>(v == 0);
        std::cout << "witness field: doubly stochastic at all " << report.ds_ok.size()
                  << " points, non-unistochastic at " << non_us << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint majorization decisions and unitary mixture certificates"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--seed", opt.seed, "seed for all randomized steps");
    app.add_option("--feas-tol", opt.feas_rel,
                   "relative feasibility tolerance for the witness LP");
    app.add_option("--cert-tol", opt.cert_tol, "certificate residual tolerance");

    std::string a_path, b_path, x_path;
    std::string method = "birkhoff";
    std::string out_path = "certificate.json";
    std::string verify_path;
    bool continuation = false;
    double epsilon = 0.05;
    double step = 0.01;
    std::string demo_name;
    std::string out_dir = ".";
    std::string decompose_out;

    auto* check = app.add_subcommand("check", "decide joint majorization of two families");
    check->add_option("A", a_path)->required();
    check->add_option("B", b_path)->required();

    auto* certify = app.add_subcommand("certify", "produce a unitary mixture certificate");
    certify->add_option("A", a_path)->required();
    certify->add_option("B", b_path)->required();
    certify->add_option("--method", method, "birkhoff | ttransform");
    certify->add_option("-o,--out", out_path, "certificate output path");
    certify->add_option("--verify", verify_path, "re-verify an existing certificate");

    auto* fcheck = app.add_subcommand("field-check", "pointwise majorization over a grid");
    fcheck->add_option("A", a_path)->required();
    fcheck->add_option("B", b_path)->required();
    fcheck->add_flag("--continuation", continuation, "also run the continuation probe");

    auto* fcert = app.add_subcommand("field-certify",
                                     "piecewise-constant approximate certificate");
    fcert->add_option("A", a_path)->required();
    fcert->add_option("B", b_path)->required();
    fcert->add_option("--epsilon", epsilon, "oscillation bound");
    fcert->add_option("-o,--out", out_path, "certificate output path");
    fcert->add_option("--verify", verify_path, "re-verify an existing certificate");

    auto* dec = app.add_subcommand("decompose-ds", "Birkhoff decomposition of a DS matrix");
    dec->add_option("X", x_path)->required();
    dec->add_option("-o,--out", decompose_out, "write terms as JSON");

    auto* uni = app.add_subcommand("unistochastic3", "3x3 chain-links unistochasticity test");
    uni->add_option("X", x_path)->required();

    auto* demo = app.add_subcommand("demo", "run a named counterexample demonstration");
    demo->add_option("name", demo_name, "prop31 | prop33 | cor34")->required();
    demo->add_option("--step", step, "grid step on [-1, 1]");
    demo->add_option("--epsilon", epsilon, "certificate oscillation bound");
    demo->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(opt, a_path, b_path);
        if (certify->parsed())
            return run_certify(opt, a_path, b_path, method, out_path, verify_path);
        if (fcheck->parsed()) return run_field_check(opt, a_path, b_path, continuation);
        if (fcert->parsed())
            return run_field_certify(opt, a_path, b_path, epsilon, out_path, verify_path);
        if (dec->parsed()) return run_decompose(x_path, decompose_out);
        if (uni->parsed()) return run_unistochastic3(x_path);
        if (demo->parsed()) return run_demo(opt, demo_name, step, epsilon, out_dir);
    } catch (const majorize::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
