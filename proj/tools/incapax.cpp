// incapax: incapacity certificates for quantum channels.

#include <iostream>

#include <CLI11.hpp>

#include "incapax/incapax.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalFailure = 3;

struct ChannelArgs {
  std::string zoo_name;
  std::vector<std::string> params;
  std::string file;
};

void add_channel_options(CLI::App* cmd, ChannelArgs* args) {
  cmd->add_option("--zoo", args->zoo_name, "zoo channel name (see `incapax zoo list`)");
  cmd->add_option("--param", args->params, "channel parameter as key=value (repeatable)");
  cmd->add_option("--channel", args->file, "channel JSON file");
}

incapax::Channel resolve_channel(const ChannelArgs& args) {
  if (!args.file.empty()) return incapax::channel_from_json_file(args.file);
  if (args.zoo_name.empty())
    throw std::invalid_argument("specify a channel via --zoo or --channel");
  std::map<std::string, double> params;
  for (const auto& kv : args.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad --param (expected key=value): " + kv);
    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return incapax::zoo::build(args.zoo_name, params);
}

// Quick self-checks over the module property suites; prints one line each.
int run_verify(std::uint64_t seed) {
  using namespace incapax;
  bool ok = true;
  auto check = [&ok](const std::string& name, bool pass) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << "\n";
    ok = ok && pass;
  };

  std::mt19937_64 rng(seed);
  {
    bool pass = true;
    for (int i = 0; i < 10; ++i) {
      CMatrix a = random_gaussian(3, 3, rng), b = random_gaussian(2, 2, rng);
      pass = pass && (partial_trace(kron(a, b), {3, 2}, 2) - b.trace() * a).norm() < 1e-10;
    }
    check("opalg: partial_trace(kron(a,b)) = Tr(b) a", pass);
  }
  {
    bool pass = true;
    for (int d : {2, 3}) {
      Channel ch = random_channel(d, d, 2, rng);
      pass = pass && verify_transpose_commutation(ch) < 1e-10;
    }
    check("forbidden: T o D = D* o T", pass);
  }
  {
    bool pass = true;
    for (int d : {2, 3, 5}) {
      PauliFamily fam = gen_paulis(d);
      CMatrix psi = random_state(d, rng).mat;
      CMatrix acc = CMatrix::Zero(d, d);
      for (const auto& s : fam.operators) acc += s * psi * s.adjoint();
      pass = pass && (acc - double(d) * psi.trace() * CMatrix::Identity(d, d)).norm() < 1e-12;
    }
    check("locc: Heisenberg-Weyl twirl identity", pass);
  }
  {
    Channel ch = random_channel(2, 2, 2, rng);
    ChoiMatrix j = choi(ch);
    Channel back = choi_to_kraus(j);
    bool pass = (superoperator(back).mat - superoperator(ch).mat).norm() < 1e-8;
    check("channel: Kraus/Choi round trip", pass);
  }
  return ok ? kExitOk : kExitNumericalFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incapax: zero-quantum-capacity certificates (PPT and antidegradability)"};
  app.require_subcommand(1);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "run the incapacity tests on a channel");
  ChannelArgs analyze_args;
  add_channel_options(analyze_cmd, &analyze_args);
  std::string output = "json";
  double tol = incapax::kDefaultTol.psd;
  int max_iter = 20000;
  std::uint64_t seed = 1234;
  bool deterministic = false;
  analyze_cmd->add_option("--output", output, "json|text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--tol", tol, "PSD tolerance");
  analyze_cmd->add_option("--max-iter", max_iter, "feasibility iteration cap");
  analyze_cmd->add_option("--seed", seed, "seed for sampled verifications");
  analyze_cmd->add_flag("--deterministic", deterministic, "fixed accumulation order, reproducible output");

  // zoo
  auto* zoo_cmd = app.add_subcommand("zoo", "channel zoo");
  auto* zoo_list = zoo_cmd->add_subcommand("list", "list registered channel families");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the module property self-checks");
  std::uint64_t verify_seed = 7;
  verify_cmd->add_option("--seed", verify_seed, "seed");

  // classify-map
  auto* classify_cmd = app.add_subcommand("classify-map", "Theorem-1 classification of a linear map");
  std::string map_file;
  int classify_samples = 64;
  std::uint64_t classify_seed = 7;
  classify_cmd->add_option("--map", map_file, "superoperator JSON file")->required();
  classify_cmd->add_option("--samples", classify_samples, "witness search sample count");
  classify_cmd->add_option("--seed", classify_seed, "seed");

  // distill-check
  auto* distill_cmd = app.add_subcommand("distill-check", "appendix nondistillability report");
  ChannelArgs distill_args;
  add_channel_options(distill_cmd, &distill_args);
  int distill_samples = 16;
  std::uint64_t distill_seed = 99;
  bool perfect_protocol = false;
  distill_cmd->add_option("--samples", distill_samples, "state samples per residual");
  distill_cmd->add_option("--seed", distill_seed, "seed");
  distill_cmd->add_flag("--perfect-protocol", perfect_protocol,
                        "use the exact teleportation protocol instead of a sampled one");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) {
      incapax::Channel ch = resolve_channel(analyze_args);
      incapax::AnalyzeOptions opts;
      opts.tol_psd = tol;
      opts.antideg.max_iter = max_iter;
      opts.seed = seed;
      opts.deterministic = deterministic;
      incapax::IncapacityReport rep = incapax::analyze(ch, opts);
      if (output == "json")
        std::cout << incapax::report_to_json(rep).dump(2) << "\n";
      else
        std::cout << incapax::report_to_text(rep);
      return kExitOk;
    }
    if (zoo_cmd->parsed()) {
      if (zoo_list->parsed()) {
        for (const auto& n : incapax::zoo::names()) std::cout << n << "\n";
        return kExitOk;
      }
      std::cerr << "usage: incapax zoo list\n";
      return kExitInputError;
    }
    if (verify_cmd->parsed()) return run_verify(verify_seed);
    if (classify_cmd->parsed()) {
      incapax::SuperOperator s = incapax::superop_from_json_file(map_file);
      incapax::ClassifierParams params;
      params.sample_count = classify_samples;
      incapax::CommutationVerdict v =
          incapax::classify_linear_map(s, s.dim_in, params, classify_seed);
      incapax::Json j;
      switch (v.status) {
        case incapax::CommutationStatus::CommutingTranspose:
          j["status"] = "commuting-transpose";
          j["p"] = v.p;
          break;
        case incapax::CommutationStatus::CommutingIdentity:
          j["status"] = "commuting-identity";
          j["p"] = v.p;
          break;
        default:
          j["status"] = "non-commuting";
          j["sampling_incomplete"] = v.sampling_incomplete;
          if (v.witness_unitary) j["witness_unitary"] = incapax::matrix_to_json(*v.witness_unitary);
      }
      j["residual"] = v.residual;
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }
    if (distill_cmd->parsed()) {
      incapax::Channel ch = resolve_channel(distill_args);
      incapax::LoccProtocol proto;
      if (perfect_protocol) {
        proto = incapax::teleportation_protocol(ch.dim_in);
      } else {
        std::mt19937_64 rng(distill_seed);
        proto = incapax::random_unitary_pair_protocol(ch.dim_in, 4, rng);
      }
      incapax::NondistillabilityReport rep =
          incapax::nondistillability_report(ch, proto, distill_samples, distill_seed);
      incapax::Json j;
      j["ppt"] = {{"verdict", rep.ppt.is_ppt}, {"min_eig", rep.ppt.min_eig}};
      j["distillation_residual"] = rep.distillation_residual;
      j["extraction_min_choi_eig"] = rep.extraction_min_choi_eig;
      j["extraction_is_cp"] = rep.extraction_is_cp;
      j["narrative"] = rep.narrative;
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
  return kExitInputError;
}
