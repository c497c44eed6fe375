#include <complex>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cgdare/geometry.hpp"
#include "cgdare/io.hpp"
#include "cgdare/popov.hpp"
#include "cgdare/riccati.hpp"
#include "cgdare/spectral.hpp"
#include "cgdare/stabilize.hpp"
#include "cgdare/stein.hpp"

namespace {

using nlohmann::json;
using namespace cgdare;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitMaxIter = 3;
constexpr int kExitModuleError = 4;

json complex_list_to_json(std::vector<std::complex<double>> values) {
    std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    json arr = json::array();
    for (const auto& v : values) arr.push_back(json::array({v.real(), v.imag()}));
    return arr;
}

json subspace_to_json(const Subspace& S) {
    return json{{"dim", S.dim()}, {"basis", matrix_to_json(S.basis())}};
}

std::complex<double> parse_complex(const std::string& token) {
    // accepts "1.5", "0.2+0.3i", "-0.2-0.3i", "0.5i"
    std::string s = token;
    if (s.empty()) throw ParseError("empty pole token");
    if (s.back() == 'i' || s.back() == 'j') {
        s.pop_back();
        // split at the last +/- that is not an exponent sign or leading sign
        size_t split = std::string::npos;
        for (size_t i = s.size(); i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        if (split == std::string::npos) {
            const std::string imag = s.empty() || s == "+" ? s + "1" : (s == "-" ? "-1" : s);
            return {0.0, std::stod(imag)};
        }
        std::string im = s.substr(split);
        if (im == "+" || im == "-") im += "1";
        return {std::stod(s.substr(0, split)), std::stod(im)};
    }
    return {std::stod(s), 0.0};
}

std::vector<std::complex<double>> parse_pole_list(const std::vector<std::string>& tokens) {
    std::vector<std::complex<double>> poles;
    for (const auto& t : tokens) poles.push_back(parse_complex(t));
    return poles;
}

PopovTriple build_triple(const ProblemFile& p) {
    PopovTriple sigma = validate_triple(p.A, p.B, p.Q, p.R, p.S, p.tol);
    if (p.C) sigma.set_output_factor(*p.C, *p.D, p.tol);
    return sigma;
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
    std::cout << text;
}

int solve_status_exit(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return kExitOk;
        case SolveStatus::Diverged: return kExitDiverged;
        case SolveStatus::MaxIterReached: return kExitMaxIter;
    }
    return kExitModuleError;
}

int cmd_solve(const ProblemFile& p, const std::string& out_path) {
    const PopovTriple sigma = build_triple(p);
    const SolveReport solved = solve_min_psd(sigma, p.tol);

    json report{{"version", kSchemaVersion},
                {"command", "solve"},
                {"status", to_string(solved.status)},
                {"iterations", solved.iterations},
                {"kernel_stationary_at", solved.kernel_stationary_at},
                {"X_bar", matrix_to_json(solved.X_bar)}};
    if (solved.status == SolveStatus::Converged) {
        const auto [K, G] = optimal_control_set(sigma, solved.X_bar, p.tol);
        const Subspace R0 = r0(sigma, solved.X_bar, p.tol);
        report["classification"] = to_string(solved.classification);
        report["K"] = matrix_to_json(K);
        report["G"] = matrix_to_json(G);
        report["ker_X_bar"] = subspace_to_json(kernel_basis(solved.X_bar, p.tol));
        report["V_star"] =
            subspace_to_json(largest_output_nulling(Quadruple::from_triple(sigma), p.tol));
        report["R0"] = subspace_to_json(R0);
        report["fixed_spectrum"] = complex_list_to_json(fixed_spectrum(sigma, solved.X_bar, p.tol));
        if (p.x0) report["optimal_cost"] = optimal_cost(solved.X_bar, *p.x0);
    }
    emit(report, out_path);
    return solve_status_exit(solved.status);
}

int cmd_verify(const ProblemFile& p, const std::string& out_path) {
    if (p.X_candidates.empty()) {
        throw ParseError("verify requires 'X_candidates' in the problem file");
    }
    const PopovTriple sigma = build_triple(p);
    const Quadruple quad = Quadruple::from_triple(sigma);

    json candidates = json::array();
    for (const Matrix& X : p.X_candidates) {
        const XQuantities q = x_quantities(sigma, X, p.tol);
        const SolutionClass cls = classify_solution(sigma, X, p.tol);
        const Subspace kerRX = kernel_basis(q.R_X, p.tol);
        const Subspace kerXB = kernel_basis(q.X * sigma.B(), p.tol);
        const Subspace kerR = kernel_basis(sigma.R(), p.tol);
        const bool kernel_identity =
            subspace_equal(kerRX, subspace_intersect(kerXB, kerR, p.tol), p.tol);
        const Subspace kerX = kernel_basis(q.X, p.tol);
        const Subspace R0 = r0(sigma, X, p.tol);
        const double x_r0_residual =
            R0.dim() > 0 ? (q.X * R0.basis()).cwiseAbs().maxCoeff() : 0.0;

        candidates.push_back(
            json{{"classification", to_string(cls)},
                 {"gdare_residual_norm", gdare_residual(sigma, X, p.tol).norm()},
                 {"kernel_condition", kernel_condition_holds(sigma, X, p.tol)},
                 {"ker_rx_identity", kernel_identity},
                 {"ker_rx", subspace_to_json(kerRX)},
                 {"output_nulling", is_output_nulling(quad, kerX, p.tol)},
                 {"friend", is_friend(quad, kerX, q.K_X, p.tol)},
                 {"x_r0_residual", x_r0_residual},
                 {"drlmi", drlmi_holds(sigma, X, p.tol)}});
    }
    emit(json{{"version", kSchemaVersion}, {"command", "verify"}, {"candidates", candidates}},
         out_path);
    return kExitOk;
}

int cmd_stein(const ProblemFile& p, const std::string& out_path) {
    const SteinSolutionSet set = stein_solve(p.A, p.Q, p.tol);
    json report{{"version", kSchemaVersion},
                {"command", "stein"},
                {"unmixed", is_unmixed(p.A, p.tol)},
                {"consistent", set.consistent()},
                {"unique", set.unique()}};
    if (set.particular) report["particular"] = matrix_to_json(*set.particular);
    json basis = json::array();
    for (const auto& H : set.homogeneous_basis) basis.push_back(matrix_to_json(H));
    report["homogeneous_basis"] = basis;
    if (set.particular) {
        const SteinKernelReport kr = stein_kernel_report(p.A, p.Q, *set.particular, p.tol);
        report["kernel_report"] = json{{"ker_X_dim", kr.ker_X.dim()},
                                       {"ker_X_A_invariant", kr.ker_X_A_invariant},
                                       {"ker_X_in_ker_Q", kr.ker_X_in_ker_Q},
                                       {"unobservable_dim", kr.unobservable.dim()},
                                       {"ker_matches_unobservable", kr.ker_matches_unobservable}};
    }
    emit(report, out_path);
    return kExitOk;
}

int cmd_spectral(const ProblemFile& p, int samples, unsigned seed, const std::string& out_path) {
    const PopovTriple sigma = build_triple(p);
    const Eigen::Index normal_rank = normal_rank_phi(sigma, p.tol, samples, seed);
    json report{{"version", kSchemaVersion},
                {"command", "spectral"},
                {"samples", samples},
                {"seed", seed},
                {"normal_rank", normal_rank}};

    std::vector<Matrix> xs = p.X_candidates;
    if (xs.empty()) {
        const SolveReport solved = solve_min_psd(sigma, p.tol);
        if (solved.status != SolveStatus::Converged) {
            emit(report, out_path);
            return solve_status_exit(solved.status);
        }
        xs.push_back(solved.X_bar);
    }
    json per_x = json::array();
    for (const Matrix& X : xs) {
        const RankComparison cmp = rank_rx_vs_normal_rank(sigma, X, p.tol, samples, seed);
        per_x.push_back(json{{"classification", to_string(cmp.classification)},
                             {"rank_rx", cmp.rank_rx},
                             {"normal_rank", cmp.normal_rank},
                             {"holds", cmp.holds}});
    }
    report["candidates"] = per_x;
    emit(report, out_path);
    return kExitOk;
}

int cmd_stabilize(const ProblemFile& p, const std::vector<std::string>& pole_tokens,
                  unsigned seed, const std::string& out_path) {
    const PopovTriple sigma = build_triple(p);
    const SolveReport solved = solve_min_psd(sigma, p.tol);
    if (solved.status != SolveStatus::Converged) return solve_status_exit(solved.status);

    const auto desired = parse_pole_list(pole_tokens);
    const StabilizationResult res = place_on_r0(sigma, solved.X_bar, desired, p.tol, seed);

    json report{{"version", kSchemaVersion},
                {"command", "stabilize"},
                {"seed", seed},
                {"X_bar", matrix_to_json(solved.X_bar)},
                {"L", matrix_to_json(res.L)},
                {"A_cl", matrix_to_json(res.A_cl)},
                {"placed_poles", complex_list_to_json(res.placed_poles)},
                {"fixed_spectrum",
                 complex_list_to_json(fixed_spectrum(sigma, solved.X_bar, p.tol))},
                {"fixed_poles_removed", res.fixed_poles_removed}};
    if (p.x0) {
        report["cost_residual"] = cost_invariance_residual(sigma, solved.X_bar, res.L, *p.x0,
                                                           /*T=*/0, p.tol);
        report["optimal_cost"] = optimal_cost(solved.X_bar, *p.x0);
    }
    emit(report, out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained generalised discrete algebraic Riccati equation toolbox"};
    app.require_subcommand(1);

    std::string path;
    std::string out_path;
    double tol_override = -1.0;
    int max_iter = -1;
    int samples = 16;
    unsigned seed = 0;
    std::vector<std::string> pole_tokens;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("problem", path, "problem file (JSON)")->required();
        cmd->add_option("--tol", tol_override, "override rank/convergence tolerance");
        cmd->add_option("--max-iter", max_iter, "iteration cap");
        cmd->add_option("--seed", seed, "RNG seed for sampling / placement");
        cmd->add_option("--out", out_path, "write the report to this file");
    };

    CLI::App* solve = app.add_subcommand("solve", "iterate to the minimal PSD solution");
    add_common(solve);
    CLI::App* verify = app.add_subcommand("verify", "classify and check candidate solutions");
    add_common(verify);
    CLI::App* stein = app.add_subcommand("stein", "solve the Stein equation X = A^T X A + Q");
    add_common(stein);
    CLI::App* spectral = app.add_subcommand("spectral", "Popov-function rank analysis");
    add_common(spectral);
    spectral->add_option("--samples", samples, "evaluation points for normal rank");
    CLI::App* stabilize = app.add_subcommand("stabilize", "pole placement on R0");
    add_common(stabilize);
    stabilize->add_option("--poles", pole_tokens, "desired poles, e.g. 0 0.5+0.1i 0.5-0.1i");

    CLI11_PARSE(app, argc, argv);

    try {
        ProblemFile p = load_problem(path);
        if (tol_override > 0.0) {
            p.tol.rank_rel = tol_override;
            p.tol.conv_rel = tol_override;
        }
        if (max_iter > 0) p.tol.max_iter = max_iter;
        p.tol.validate();

        if (solve->parsed()) return cmd_solve(p, out_path);
        if (verify->parsed()) return cmd_verify(p, out_path);
        if (stein->parsed()) return cmd_stein(p, out_path);
        if (spectral->parsed()) return cmd_spectral(p, samples, seed, out_path);
        if (stabilize->parsed()) return cmd_stabilize(p, pole_tokens, seed, out_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotPositiveSemidefinite& e) {
        std::cerr << "error: " << e.what()
                  << " (most negative eigenvalue " << e.most_negative_eigenvalue << ")\n";
        return kExitValidation;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModuleError;
    }
    return kExitValidation;
}
