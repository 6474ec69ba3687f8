// Command-line front end: realize, eval, equiv, mcmillan, taylor, hermitian,
// descriptor, cohn. All I/O is JSON with exact rationals as "p/q" strings.
// Exit codes: 0 ok, 1 internal error, 2 parse error, 3 centre not in domain,
// 4 point not in domain, 5 inconclusive, 6 not hermitian.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ncfm/algebras.hpp"
#include "ncfm/io.hpp"

using namespace ncfm;
using Q = Rational;
using MQ = Matrix<Q>;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitCentre = 3;
constexpr int kExitNotInDomain = 4;
constexpr int kExitInconclusive = 5;
constexpr int kExitNotHermitian = 6;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitParse, "cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw CliError(kExitParse, "bad JSON in " + path + ": " + e.what());
  }
}

std::vector<MQ> load_tuple(const std::string& path) {
  try {
    return matrix_tuple_from_json<Q>(load_json(path));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(kExitParse, std::string("bad matrix tuple: ") + e.what());
  }
}

ExprPtr parse_expr(const std::string& text, int d_flag) {
  try {
    // with no explicit d, first parse permissively to find the max index
    int d = d_flag > 0 ? d_flag : 64;
    ExprPtr e = parse(text, d);
    if (d_flag <= 0) {
      int used = std::max(1, max_var_index(e));
      e = parse(text, used);
    }
    return e;
  } catch (const ParseError& err) {
    throw CliError(kExitParse, std::string("expression: ") + err.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run(int argc, char** argv) {
  CLI::App app{"nc rational expressions as state-space pencil realizations"};
  app.require_subcommand(1);

  std::string expr_text, expr2_text, centre_path, point_path, realization_path, f_path;
  std::string direction = "fm2d", algebra_name = "matn:2", sizes_csv = "1,2,3,4";
  int d_flag = 0, order = 2, budget = 64, samples = 50;
  std::uint64_t seed = 0;
  bool minimize = false;

  auto* realize = app.add_subcommand("realize", "synthesize a realization at a centre");
  realize->add_option("--expr", expr_text)->required();
  realize->add_option("--centre", centre_path)->required();
  realize->add_option("--d", d_flag);
  realize->add_flag("--minimize", minimize);

  auto* eval = app.add_subcommand("eval", "evaluate an expression or realization at a point");
  eval->add_option("--expr", expr_text);
  eval->add_option("--centre", centre_path);
  eval->add_option("--realization", realization_path);
  eval->add_option("--point", point_path)->required();
  eval->add_option("--d", d_flag);

  auto* equiv = app.add_subcommand("equiv", "decide equivalence of two expressions");
  equiv->add_option("--expr1", expr_text)->required();
  equiv->add_option("--expr2", expr2_text)->required();
  equiv->add_option("--seed", seed)->required();
  equiv->add_option("--budget", budget);
  equiv->add_option("--sizes", sizes_csv);
  equiv->add_option("--d", d_flag);

  auto* mcmillan = app.add_subcommand("mcmillan", "McMillan degree at a centre");
  mcmillan->add_option("--expr", expr_text)->required();
  mcmillan->add_option("--centre", centre_path)->required();
  mcmillan->add_option("--d", d_flag);

  auto* taylor = app.add_subcommand("taylor", "truncated series table at a centre");
  taylor->add_option("--expr", expr_text)->required();
  taylor->add_option("--centre", centre_path)->required();
  taylor->add_option("--order", order);
  taylor->add_option("--d", d_flag);

  auto* hermitian = app.add_subcommand("hermitian", "hermitian structure of a minimal realization");
  hermitian->add_option("--realization", realization_path)->required();
  hermitian->add_option("--F", f_path);

  auto* descriptor = app.add_subcommand("descriptor", "FM <-> descriptor conversion");
  descriptor->add_option("--realization", realization_path)->required();
  descriptor->add_option("--direction", direction)->check(CLI::IsMember({"fm2d", "d2fm"}));

  auto* cohn = app.add_subcommand("cohn", "evaluate an equivalent pair over an algebra");
  cohn->add_option("--expr1", expr_text)->required();
  cohn->add_option("--expr2", expr2_text)->required();
  cohn->add_option("--algebra", algebra_name);
  cohn->add_option("--samples", samples);
  cohn->add_option("--seed", seed)->required();
  cohn->add_option("--d", d_flag);

  CLI11_PARSE(app, argc, argv);

  if (realize->parsed()) {
    ExprPtr e = parse_expr(expr_text, d_flag);
    std::vector<MQ> centre = load_tuple(centre_path);
    if (static_cast<int>(centre.size()) < std::max(1, max_var_index(e)))
      throw CliError(kExitParse, "centre tuple shorter than the variable count");
    e = parse_expr(expr_text, static_cast<int>(centre.size()));
    auto synth = synthesize(e, centre);
    if (!synth) throw CliError(kExitCentre, "centre not in the expression domain");
    json out;
    if (minimize) {
      auto [reduced, report] = kalman_reduce(*synth);
      out["realization"] = to_json(reduced);
      out["kalman_report"] = to_json(report);
    } else {
      out["realization"] = to_json(*synth);
    }
    emit(out);
    return 0;
  }

  if (eval->parsed()) {
    std::vector<MQ> point = load_tuple(point_path);
    std::optional<MQ> value;
    if (!realization_path.empty()) {
      FMRealization<Q> r = realization_from_json<Q>(load_json(realization_path));
      value = r.evaluate(point);
    } else if (!expr_text.empty()) {
      ExprPtr e = parse_expr(expr_text, d_flag > 0 ? d_flag : static_cast<int>(point.size()));
      value = eval_matrices(e, point);
    } else {
      throw CliError(kExitParse, "eval needs --expr or --realization");
    }
    if (!value) {
      emit(json{{"in_domain", false}});
      return kExitNotInDomain;
    }
    emit(json{{"in_domain", true}, {"value", to_json(*value)}});
    return 0;
  }

  if (equiv->parsed()) {
    int d = d_flag;
    ExprPtr e1 = parse_expr(expr_text, d);
    ExprPtr e2 = parse_expr(expr2_text, d);
    if (d <= 0) {
      d = std::max({1, max_var_index(e1), max_var_index(e2)});
      e1 = parse_expr(expr_text, d);
      e2 = parse_expr(expr2_text, d);
    }
    EquivalenceOptions opt;
    opt.centre.seed = seed;
    opt.centre.budget = budget;
    opt.centre.sizes.clear();
    for (size_t pos = 0; pos < sizes_csv.size();) {
      size_t comma = sizes_csv.find(',', pos);
      if (comma == std::string::npos) comma = sizes_csv.size();
      opt.centre.sizes.push_back(std::stoi(sizes_csv.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    auto verdict = equivalent<Q>(e1, e2, d, opt);
    emit(to_json(verdict));
    return verdict.status == Equivalence::Inconclusive ? kExitInconclusive : 0;
  }

  if (mcmillan->parsed()) {
    std::vector<MQ> centre = load_tuple(centre_path);
    ExprPtr e = parse_expr(expr_text, static_cast<int>(centre.size()));
    try {
      std::cout << mcmillan_degree(e, centre) << "\n";
    } catch (const std::invalid_argument&) {
      throw CliError(kExitCentre, "centre not in the expression domain");
    }
    return 0;
  }

  if (taylor->parsed()) {
    std::vector<MQ> centre = load_tuple(centre_path);
    ExprPtr e = parse_expr(expr_text, static_cast<int>(centre.size()));
    auto table = taylor_table(e, centre, order);
    if (!table) throw CliError(kExitCentre, "centre not in the expression domain");
    emit(to_json(*table));
    return 0;
  }

  if (hermitian->parsed()) {
    FMRealization<Q> r = realization_from_json<Q>(load_json(realization_path));
    json out;
    if (!is_minimal(r)) {
      r = kalman_reduce(r).first;
      out["minimized"] = true;
    }
    auto s = structure_matrix(r);
    if (!s) {
      emit(json{{"hermitian", false}});
      return kExitNotHermitian;
    }
    auto h = symmetric_form(r, *s);
    if (!h) throw CliError(1, "symmetric form construction failed");
    MQ f = f_path.empty() ? MQ::identity(r.s) : matrix_from_json<Q>(load_json(f_path));
    out["hermitian"] = true;
    out["kernel_image_identities"] = kernel_image_check(*s, r);
    out["structure"] = to_json(*h);
    out["descriptor"] = to_json(descriptor_form(*h, f));
    emit(out);
    return 0;
  }

  if (descriptor->parsed()) {
    json in = load_json(realization_path);
    if (direction == "fm2d") {
      FMRealization<Q> r = realization_from_json<Q>(in);
      emit(to_json(fm_to_descriptor(r)));
    } else {
      DescriptorRealization<Q> dr = descriptor_from_json<Q>(in);
      emit(to_json(descriptor_to_fm(dr)));
    }
    return 0;
  }

  if (cohn->parsed()) {
    int d = d_flag;
    ExprPtr e1 = parse_expr(expr_text, d);
    ExprPtr e2 = parse_expr(expr2_text, d);
    if (d <= 0) {
      d = std::max({1, max_var_index(e1), max_var_index(e2)});
      e1 = parse_expr(expr_text, d);
      e2 = parse_expr(expr2_text, d);
    }
    std::unique_ptr<UnitalAlgebra<Q>> alg;
    if (algebra_name.rfind("matn:", 0) == 0)
      alg = std::make_unique<MatrixAlg<Q>>(std::stoi(algebra_name.substr(5)));
    else if (algebra_name.rfind("ut:", 0) == 0)
      alg = std::make_unique<UpperTriangularAlg<Q>>(std::stoi(algebra_name.substr(3)));
    else
      throw CliError(kExitParse, "unknown algebra (use matn:<n> or ut:<n>): " + algebra_name);
    EquivalenceOptions eopt;
    eopt.centre.seed = seed;
    CohnReport rep;
    try {
      rep = cohn_check(*alg, e1, e2, d, samples, seed + 1, eopt);
    } catch (const std::invalid_argument& err) {
      throw CliError(kExitInconclusive, err.what());
    }
    emit(json{{"algebra", alg->name()},
              {"samples", rep.samples},
              {"common_domain_hits", rep.common_domain_hits},
              {"direct_agree", rep.direct_agree},
              {"realization_identity_holds", rep.realization_identity_holds}});
    return rep.direct_agree && rep.realization_identity_holds ? 0 : 1;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
