#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "clakap/bench.hpp"
#include "clakap/error.hpp"
#include "clakap/game.hpp"
#include "clakap/key_file.hpp"
#include "clakap/kgc.hpp"
#include "clakap/random.hpp"
#include "clakap/transport.hpp"
#include "clakap/user_keys.hpp"

namespace fs = std::filesystem;
using namespace clakap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProtocol = 2;
constexpr int kExitTransport = 3;
constexpr int kExitInput = 4;

// Anything thrown while loading inputs counts as a bad input file.
template <class F>
auto load(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::bad_key_file || e.code() == Errc::unsupported_version) throw;
    throw Error(Errc::bad_key_file, e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::bad_key_file, e.what());
  }
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::transport:
      return kExitTransport;
    case Errc::bad_key_file:
    case Errc::unsupported_version:
    case Errc::script_error:
      return kExitInput;
    default:
      return kExitProtocol;
  }
}

struct Options {
  std::string profile = "toy-17";
  std::string out;
  std::string master;
  std::string params;
  std::string id;
  std::string user_point;
  std::string out_prefix;
  std::string partial;
  std::string public_key;
  std::string listen;
  std::string connect;
  std::string priv;
  std::string pub;
  std::string peer_id;
  std::string peer_pub;
  bool transcript = false;
  unsigned timeout_ms = 10000;
  std::string script;
  std::string bench_profile = "p256";
  std::size_t sessions = 100;
};

int cmd_setup(const Options& o, RandomSource& rng) {
  const auto curve = load([&] { return Curve::named(o.profile); });
  const auto [params, master] = setup(curve, rng);
  const fs::path dir(o.out);
  load([&] { return fs::create_directories(dir); });
  write_key_file(dir / "params.key", to_key_file(params));
  write_key_file(dir / "master.key", to_key_file(*curve, master));
  std::cout << "wrote " << (dir / "params.key").string() << " and " << (dir / "master.key").string() << "\n";
  return kExitOk;
}

int cmd_extract(const Options& o, RandomSource& rng) {
  const auto [curve, master] = load([&] { return master_from(read_key_file(o.master)); });
  const auto [id, user_point] = load([&, c = curve] {
    const Identity requested(o.id);
    auto entry = user_point_from(read_key_file(o.user_point), *c);
    if (entry.first != requested) {
      throw Error(Errc::bad_key_file, "user-point file belongs to '" + entry.first.str() + "'");
    }
    return entry;
  });
  const SystemParams params = params_for_master(curve, master);
  const PartialKey partial = extract_partial_key(master, params, id, user_point, rng);
  write_key_file(o.out, to_key_file(*curve, id, partial));
  std::cout << "partial key for " << id.str() << " written to " << o.out << "\n";
  return kExitOk;
}

int cmd_keygen(const Options& o, RandomSource& rng) {
  const SystemParams params = load([&] { return params_from(read_key_file(o.params)); });
  const Curve& curve = params.group();
  const Identity id = load([&] { return Identity(o.id); });
  const std::string secret_path = o.out_prefix + ".secret";

  if (o.partial.empty()) {
    const SecretValue secret = set_secret_value(params, rng);
    write_key_file(secret_path, to_key_file(curve, id, secret));
    write_key_file(o.out_prefix + ".point", user_point_file(curve, id, secret.user_point));
    std::cout << "wrote " << secret_path << " and " << o.out_prefix << ".point\n";
    return kExitOk;
  }

  const SecretValue secret = load([&] {
    auto [owner, value] = secret_from(read_key_file(secret_path), curve);
    if (owner != id) throw Error(Errc::bad_key_file, secret_path + " belongs to '" + owner.str() + "'");
    return value;
  });
  const PartialKey partial = load([&] {
    auto [owner, value] = partial_from(read_key_file(o.partial), curve);
    if (owner != id) throw Error(Errc::bad_key_file, o.partial + " belongs to '" + owner.str() + "'");
    return value;
  });
  const UserKeys keys = assemble_keys(secret.x, partial, params, id);
  write_key_file(o.out_prefix + ".priv", private_key_file(curve, id, keys.priv));
  write_key_file(o.out_prefix + ".pub", public_key_file(curve, id, keys.pub));
  std::cout << "wrote " << o.out_prefix << ".priv and " << o.out_prefix << ".pub\n";
  return kExitOk;
}

int cmd_validate(const Options& o) {
  const SystemParams params = load([&] { return params_from(read_key_file(o.params)); });
  const Curve& curve = params.group();
  const Identity id = load([&] { return Identity(o.id); });
  const PublicKey pub = load([&] { return public_key_from(read_key_file(o.public_key), curve).second; });
  const PartialKey partial = load([&] { return partial_from(read_key_file(o.partial), curve).second; });
  const bool ok = pub.commitment == partial.commitment && validate_partial_key(params, id, pub.user_point, partial);
  std::cout << (ok ? "valid" : "invalid") << "\n";
  return ok ? kExitOk : kExitProtocol;
}

int cmd_agree(const Options& o, RandomSource& rng) {
  const bool listening = !o.listen.empty();
  const Endpoint endpoint = Endpoint::parse(listening ? o.listen : o.connect);
  const AgreementMaterial material = load([&] {
    SystemParams params = params_from(read_key_file(o.params));
    const Curve& curve = params.group();
    auto [id, priv] = private_key_from(read_key_file(o.priv), curve);
    auto [pub_id, pub] = public_key_from(read_key_file(o.pub), curve);
    if (pub_id != id) throw Error(Errc::bad_key_file, "public key file belongs to '" + pub_id.str() + "'");
    if (curve.mul_base(priv.secret_value) != pub.user_point) {
      throw Error(Errc::bad_key_file, "private and public key files do not match");
    }
    const Identity peer_id(o.peer_id);
    auto [file_peer, peer_pub] = public_key_from(read_key_file(o.peer_pub), curve);
    if (file_peer != peer_id) {
      std::cerr << "warning: peer key file is labelled '" << file_peer.str() << "', using it for '" << peer_id.str()
                << "'\n";
    }
    return AgreementMaterial{std::move(params), UserKeys{id, priv, pub}, PeerInfo{peer_id, peer_pub}};
  });

  const std::chrono::milliseconds timeout(o.timeout_ms);
  AgreementResult result = [&] {
    if (!listening) return connect_and_initiate(endpoint, material, rng, timeout);
    Listener listener(endpoint);
    std::cout << "listening on port " << listener.port() << std::endl;
    return listener.accept_and_respond(material, rng, timeout);
  }();

  if (o.transcript) {
    for (const auto& line : result.log) std::cout << line << "\n";
    for (const auto& line : describe_transcript(material.params.group(), result.transcript)) {
      std::cout << line << "\n";
    }
  }
  std::cout << "fingerprint " << result.key.fingerprint() << "\n";
  return kExitOk;
}

int cmd_game(const Options& o, RandomSource& rng) {
  std::ifstream script(o.script);
  if (!script) throw Error(Errc::bad_key_file, "cannot open script " + o.script);
  const ScenarioSummary summary = run_scenario(script, std::cout, rng);
  std::cout << summary.commands << " queries, " << summary.errors << " rejected\n";
  return kExitOk;
}

int cmd_bench(const Options& o, RandomSource& rng) {
  const auto curve = load([&] { return Curve::named(o.bench_profile); });
  std::cout << format_report(run_bench(curve, o.sessions, rng));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certificateless two-party key agreement toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* setup_cmd = app.add_subcommand("setup", "Generate system parameters and a master key");
  setup_cmd->add_option("--profile", o.profile, "Curve profile (toy-17 or p256)");
  setup_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* extract_cmd = app.add_subcommand("extract", "Issue a partial private key");
  extract_cmd->add_option("--master", o.master, "Master key file")->required();
  extract_cmd->add_option("--id", o.id, "User identity")->required();
  extract_cmd->add_option("--user-point", o.user_point, "User point file from keygen")->required();
  extract_cmd->add_option("--out", o.out, "Partial key output file")->required();

  auto* keygen_cmd = app.add_subcommand("keygen", "Create a secret value, or assemble full keys with --partial");
  keygen_cmd->add_option("--params", o.params, "System parameter file")->required();
  keygen_cmd->add_option("--id", o.id, "User identity")->required();
  keygen_cmd->add_option("--out-prefix", o.out_prefix, "Prefix for generated files")->required();
  keygen_cmd->add_option("--partial", o.partial, "Partial key file issued for <prefix>.point");

  auto* validate_cmd = app.add_subcommand("validate", "Check a partial key against a public key");
  validate_cmd->add_option("--params", o.params, "System parameter file")->required();
  validate_cmd->add_option("--id", o.id, "User identity")->required();
  validate_cmd->add_option("--public", o.public_key, "Public key file")->required();
  validate_cmd->add_option("--partial", o.partial, "Partial key file")->required();

  auto* agree_cmd = app.add_subcommand("agree", "Run one key agreement over TCP");
  auto* mode = agree_cmd->add_option_group("mode");
  mode->add_option("--listen", o.listen, "Respond on host:port (port 0 picks one)");
  mode->add_option("--connect", o.connect, "Initiate towards host:port");
  mode->require_option(1);
  agree_cmd->add_option("--params", o.params, "System parameter file")->required();
  agree_cmd->add_option("--priv", o.priv, "Own private key file")->required();
  agree_cmd->add_option("--pub", o.pub, "Own public key file")->required();
  agree_cmd->add_option("--peer-id", o.peer_id, "Peer identity")->required();
  agree_cmd->add_option("--peer-pub", o.peer_pub, "Peer public key file")->required();
  agree_cmd->add_flag("--transcript", o.transcript, "Print the exchanged frames and transcript");
  agree_cmd->add_option("--timeout-ms", o.timeout_ms, "Socket I/O timeout");

  auto* game_cmd = app.add_subcommand("game", "Run an adversary script against the oracle table");
  game_cmd->add_option("--script", o.script, "Scenario script")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Time honest agreements and count operations");
  bench_cmd->add_option("--profile", o.bench_profile, "Curve profile");
  bench_cmd->add_option("--sessions", o.sessions, "Number of agreements");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto rng = load([] { return random_from_env(); });
    if (*setup_cmd) return cmd_setup(o, *rng);
    if (*extract_cmd) return cmd_extract(o, *rng);
    if (*keygen_cmd) return cmd_keygen(o, *rng);
    if (*validate_cmd) return cmd_validate(o);
    if (*agree_cmd) return cmd_agree(o, *rng);
    if (*game_cmd) return cmd_game(o, *rng);
    if (*bench_cmd) return cmd_bench(o, *rng);
  } catch (const Error& e) {
    std::cerr << "clakap: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "clakap: " << e.what() << "\n";
    return kExitProtocol;
  }
  return kExitOk;
}
