#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "mcc/codegen.hpp"
#include "mcc/pipeline.hpp"
#include "support/random_terms.hpp"

using namespace mcc;
using mcc::support::running_signature;
using mcc::support::running_term;

namespace {

TargetTemplate counting_template() {
  TargetTemplate t;
  t.statements = {{"constant", "{var} = C({rows},{cols})"}, {"identity", "{var} = I({n})"},
                  {"swap", "{var} = S({m},{n},{mode})"},    {"product", "{var} = {lhs}*{rhs}"},
                  {"kronecker", "{var} = K({lhs},{rhs})"},  {"directsum", "{var} = D({lhs},{rhs})"},
                  {"output", "out {var}"}};
  return t;
}

MatrixBindings seed42() {
  const auto sig = running_signature();
  std::map<ObjectName, std::size_t> dims;
  for (const auto& o : sig.objects) dims[o] = 2;
  return random_bindings(sig, dims, Mode::kron, 42);
}

TargetTemplate numpy_template() {
  return pipeline::parse_template(parse_json_text(support::read_file(MCC_SAMPLES_DIR "/templates/numpy.json")));
}

bool have_numpy() {
  static const bool ok = [] {
    const std::string py = MCC_PYTHON;
    return !py.empty() && support::run_command(py + " -c 'import numpy' 2>/dev/null").first == 0;
  }();
  return ok;
}

Matrix run_python(const std::string& source) {
  const auto path = std::filesystem::temp_directory_path() / ("mcc_codegen_" + std::to_string(::getpid()) + ".py");
  {
    std::ofstream out(path);
    out << source;
  }
  const auto [rc, out] = support::run_command(std::string(MCC_PYTHON) + " " + path.string());
  std::filesystem::remove(path);
  if (rc != 0) throw std::runtime_error("python failed:\n" + source);
  const Json j = Json::parse(out);
  return Matrix(j.at("rows"), j.at("cols"), j.at("entries").get<std::vector<double>>());
}

}  // namespace

TEST(Codegen, GeneratorIsOneConstantAndOutput) {
  const auto code = codegen(Term::gen("f1"), running_signature(), seed42(), Mode::kron, counting_template());
  EXPECT_EQ(code.statement_counts, (std::map<std::string, std::size_t>{{"constant", 1}, {"output", 1}}));
  EXPECT_EQ(code.source, "t0 = C(2,4)\nout t0\n");
}

TEST(Codegen, SeqIsTwoConstantsAndAProduct) {
  Signature sig;
  sig.objects = {"a"};
  sig.generators = {{"f", {"a"}, {"a"}}, {"g", {"a"}, {"a"}}};
  const auto b = random_bindings(sig, {{"a", 2}}, Mode::kron, 1);
  const auto code = codegen(Term::seq(Term::gen("f"), Term::gen("g")), sig, b, Mode::kron, counting_template());
  EXPECT_EQ(code.statement_counts.at("constant"), 2u);
  EXPECT_EQ(code.statement_counts.at("product"), 1u);
  EXPECT_EQ(code.source, "t0 = C(2,2)\nt1 = C(2,2)\nt2 = t0*t1\nout t2\n");
}

TEST(Codegen, RunningExampleCounts) {
  const auto code = codegen(running_term(), running_signature(), seed42(), Mode::kron, counting_template());
  EXPECT_EQ(code.statement_counts.at("constant"), 4u);
  EXPECT_EQ(code.statement_counts.at("kronecker"), 2u);
  EXPECT_EQ(code.statement_counts.at("product"), 1u);
  EXPECT_EQ(code.statement_counts.count("directsum"), 0u);
}

TEST(Codegen, PostOrder) {
  const auto code = codegen(running_term(), running_signature(), seed42(), Mode::kron, counting_template());
  EXPECT_EQ(code.source,
            "t0 = C(2,4)\nt1 = C(2,2)\nt2 = K(t0,t1)\n"
            "t3 = C(2,2)\nt4 = C(4,2)\nt5 = K(t3,t4)\n"
            "t6 = t2*t5\nout t6\n");
}

TEST(Codegen, MissingStatementIsTemplateError) {
  auto tpl = counting_template();
  tpl.statements.erase("kronecker");
  EXPECT_THROW(codegen(Term::gen("f1"), running_signature(), seed42(), Mode::kron, tpl), TemplateError);
  // dirsum does not need it.
  Signature sig;
  sig.objects = {"a"};
  sig.generators = {{"f", {"a"}, {"a"}}};
  const auto b = random_bindings(sig, {{"a", 2}}, Mode::dirsum, 1);
  EXPECT_NO_THROW(codegen(Term::gen("f"), sig, b, Mode::dirsum, tpl));
}

TEST(Codegen, UnknownPlaceholderIsTemplateError) {
  auto tpl = counting_template();
  tpl.statements["identity"] = "{var} = I({size})";
  try {
    codegen(Term::id({"x1"}), running_signature(), seed42(), Mode::kron, tpl);
    FAIL();
  } catch (const TemplateError& e) {
    EXPECT_EQ(e.field("placeholder"), "size");
  }
}

TEST(Codegen, DoubledBracesAreLiteral) {
  auto tpl = counting_template();
  tpl.statements["output"] = "out({{'m': {var}}})";
  EXPECT_EQ(codegen(Term::gen("f1"), running_signature(), seed42(), Mode::kron, tpl).source, "t0 = C(2,4)\nout({'m': t0})\n");
}

TEST(Codegen, StatementWithoutVarIsTemplateError) {
  auto tpl = counting_template();
  tpl.statements["product"] = "pass";
  EXPECT_THROW(codegen(Term::gen("f1"), running_signature(), seed42(), Mode::kron, tpl), TemplateError);
}

TEST(Codegen, ShortestRoundTripLiterals) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  const double x = 0.30000000000000004;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Codegen, NumpyRunningExample) {
  if (!have_numpy()) GTEST_SKIP() << "python3 with numpy not available";
  const auto b = seed42();
  const Matrix got = run_python(codegen(running_term(), running_signature(), b, Mode::kron, numpy_template()).source);
  EXPECT_LE(max_abs_diff(got, evaluate(running_term(), running_signature(), b)), 1e-12);
}

TEST(Codegen, NumpyRandomTermsBothModes) {
  if (!have_numpy()) GTEST_SKIP() << "python3 with numpy not available";
  support::Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    const Signature sig = support::random_signature(rng);
    const Term t = support::random_term(rng, sig);
    for (Mode mode : {Mode::kron, Mode::dirsum}) {
      const auto b = support::draw_bindings(rng, sig, mode, 2);
      const Matrix got = run_python(codegen(t, sig, b, mode, numpy_template()).source);
      EXPECT_LE(max_abs_diff(got, evaluate(t, sig, b)), 1e-9);
    }
  }
}
