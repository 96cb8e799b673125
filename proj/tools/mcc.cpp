// mcc: command line front end for the monoidal diagram compiler.
//
//   mcc check FILE
//   mcc compile FILE [--bindings B] [--mode kron|dirsum] [--emit TEMPLATE] [--json]
//   mcc normalize FILE [--minimize-width] [-o OUT]
//   mcc render FILE [--style string|brick] [--width W] [--height H] [--font-size S] [-o OUT] [--json]
//   mcc proof FILE [--latex]
//   mcc stats FILE
//   mcc serve [--host H] [--port P]
//
// Results go to stdout as canonical JSON (the same bytes the HTTP service
// returns). Library errors print {"error":{...}} and exit 1; usage errors exit 2.

#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "mcc/pipeline.hpp"
#include "mcc/service.hpp"

namespace {

struct IoError : mcc::Error {
  IoError(const std::string& message, Fields f) : Error("IOError", message, std::move(f)) {}
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'", {{"file", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'", {{"file", path}});
  out << text;
}

void emit(const std::string& text) {
  std::cout << text;
  if (isatty(STDOUT_FILENO) && !text.empty() && text.back() != '\n') std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile, rewrite and draw string diagrams of monoidal categories"};
  app.require_subcommand(1);

  std::string input;
  std::string bindings_path, mode, emit_path, out_path, style = "string", host = mcc::service::kDefaultHost;
  bool minimize = false, latex = false, as_json = false;
  double width = 480, height = 320, font_size = 12;
  int port = mcc::service::default_port();

  auto* check = app.add_subcommand("check", "Validate a document and print its type");
  auto* compile = app.add_subcommand("compile", "Evaluate to a matrix, or emit code from a template");
  auto* normalize = app.add_subcommand("normalize", "Rewrite the term to normal form");
  auto* render = app.add_subcommand("render", "Draw the diagram as SVG");
  auto* proof = app.add_subcommand("proof", "Print the derivation tree");
  auto* stats = app.add_subcommand("stats", "Print size measures of the term");
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");

  for (auto* sub : {check, compile, normalize, render, proof, stats})
    sub->add_option("file", input, "IL document (.mcil.json), or - for stdin")->required();

  compile->add_option("--bindings", bindings_path, "MatrixBindings JSON file (overrides the document's)");
  compile->add_option("--mode", mode, "kron or dirsum (default: the bindings' mode)")
      ->check(CLI::IsMember({"kron", "dirsum"}));
  compile->add_option("--emit", emit_path, "Target template JSON; prints generated code");
  compile->add_flag("--json", as_json, "With --emit, print the JSON envelope instead of the code");

  normalize->add_flag("--minimize-width", minimize, "Also apply the width heuristic");
  normalize->add_option("-o,--output", out_path, "Write the document here instead of stdout");

  render->add_option("--style", style, "string or brick")->check(CLI::IsMember({"string", "brick"}));
  render->add_option("--width", width, "Viewport width in px")->check(CLI::PositiveNumber);
  render->add_option("--height", height, "Viewport height in px")->check(CLI::PositiveNumber);
  render->add_option("--font-size", font_size, "Label font size in px")->check(CLI::PositiveNumber);
  render->add_option("-o,--output", out_path, "Write the SVG here instead of stdout");
  render->add_flag("--json", as_json, "Print the JSON envelope instead of bare SVG");

  proof->add_flag("--latex", latex, "Print LaTeX instead of indented text");

  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (default from MCC_PORT)")->check(CLI::Range(1, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (serve->parsed()) {
    httplib::Server server;
    mcc::service::install_routes(server);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    return 0;
  }

  try {
    const mcc::Json j = mcc::parse_json_text(slurp(input));
    mcc::ILDocument doc = mcc::from_json(j);
    mcc::Json options = mcc::Json::object();
    std::string verb;

    if (check->parsed()) verb = "check";
    if (stats->parsed()) verb = "stats";
    if (proof->parsed()) verb = "proof";
    if (compile->parsed()) {
      verb = "compile";
      if (!bindings_path.empty())
        doc.bindings = mcc::parse_bindings(mcc::parse_json_text(slurp(bindings_path)), &doc.signature, "");
      if (!mode.empty()) options["mode"] = mode;
      if (!emit_path.empty()) options["emit"] = mcc::parse_json_text(slurp(emit_path));
    }
    if (normalize->parsed()) {
      verb = "normalize";
      if (minimize) options["minimize_width"] = true;
    }
    if (render->parsed()) {
      verb = "render";
      options["style"] = style;
      options["width"] = width;
      options["height"] = height;
      options["font_size"] = font_size;
    }

    const mcc::Json result = mcc::pipeline::run(verb, doc, options);

    if (verb == "compile" && !emit_path.empty() && !as_json) {
      emit(result.at("code").get<std::string>());
    } else if (verb == "render" && !as_json) {
      if (out_path.empty()) emit(result.at("svg").get<std::string>());
      else spill(out_path, result.at("svg").get<std::string>());
    } else if (verb == "proof") {
      emit(result.at(latex ? "latex" : "text").get<std::string>());
    } else if (verb == "normalize" && !out_path.empty()) {
      spill(out_path, mcc::canonical_dump(result));
    } else {
      emit(mcc::canonical_dump(result));
    }
    return 0;
  } catch (const mcc::Error& e) {
    emit(mcc::canonical_dump(mcc::pipeline::error_json(e)));
    return 1;
  }
}
