#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "spr/errors.hpp"
#include "spr/io.hpp"
#include "spr/report.hpp"
#include "spr/sidon.hpp"

using namespace spr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "spr_lab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Io, ComplexAndCoefficients) {
  EXPECT_EQ(to_json(cplx(1.5, -2.0)).dump(), "[1.5,-2.0]");
  EXPECT_EQ(cplx_from_json(Json(3.0)), cplx(3.0, 0.0));
  const CoefVec a{{0.1, 0.2}, {-1.0 / 3, 0.0}};
  EXPECT_EQ(coeffs_from_json(to_json(a)), a);
  EXPECT_THROW(cplx_from_json(Json::parse("[1,2,3]")), InvalidArgument);
  EXPECT_THROW(coeffs_from_json(Json("x")), InvalidArgument);
}

TEST(Io, MeasureRoundTrip) {
  for (const auto& m : {make_interval_grid(32), make_square_grid(8), make_product_space(support_preset("complex4"), 3)}) {
    const auto back = measure_from_json(to_json(*m));
    EXPECT_TRUE(back->same_as(*m));
    EXPECT_EQ(back->size(), m->size());
  }
}

TEST(Io, BasisRoundTripIsBitExact) {
  const OrthoBasis bases[] = {lacunary_sine_basis(3, 4, 512), rudin_2d_basis({1, 2, 5}, 3, 16),
                              lacunary_poly_basis({1.0, cplx(0.0, 0.5)}, 5, 2, 256),
                              iid_basis(support_preset("ternary"), 3)};
  int n = 0;
  for (const auto& b : bases) {
    const auto path = scratch("basis" + std::to_string(n++) + ".json");
    write_basis(path, b);
    const auto back = read_basis(path);
    ASSERT_EQ(back.size(), b.size());
    EXPECT_EQ(back.field(), b.field());
    EXPECT_EQ(back.provenance().kind, b.provenance().kind);
    EXPECT_EQ(back.provenance().sequence, b.provenance().sequence);
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t a = 0; a < b.measure()->size(); ++a) ASSERT_EQ(back.r(k)[a], b.r(k)[a]);
  }
}

TEST(Io, FunctionCsvValidation) {
  const auto m = make_interval_grid(4);
  const auto f = SampledFunction::generate(m, [](std::size_t a) { return cplx(0.1 * a, -1.0 / 3); });
  const auto path = scratch("f.csv");
  write_function_csv(path, f);
  EXPECT_EQ(slurp(path).substr(0, 16), "atom,weight,re,i");
  const auto back = read_function_csv(path, m);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(back[a], f[a]);
  EXPECT_THROW(read_function_csv(path, make_interval_grid(8)), InvalidArgument);
  std::ofstream(scratch("bad.csv")) << "x,y\n";
  EXPECT_THROW(read_function_csv(scratch("bad.csv"), m), InvalidArgument);
  EXPECT_THROW(read_function_csv(scratch("missing.csv"), m), IoError);
}

TEST(Io, SequenceRoundTrip) {
  const auto s = sidon::singer_difference_set(3);
  const auto back = bh_sequence_from_json(to_json(s));
  EXPECT_EQ(back.terms, s.terms);
  EXPECT_EQ(back.modulus, 13);
  EXPECT_EQ(back.method, sidon::Method::singer);
}

TEST(Io, ReadJsonErrors) {
  EXPECT_THROW(read_json_file(scratch("nope.json")), IoError);
  std::ofstream(scratch("garbage.json")) << "{not json";
  EXPECT_THROW(read_json_file(scratch("garbage.json")), IoError);
  std::ofstream(scratch("wrong.json")) << R"({"format": "other"})";
  EXPECT_THROW(read_basis(scratch("wrong.json")), InvalidArgument);
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(2.0), "2.0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1e300), "1.0000000000000001e+300");
  EXPECT_EQ(format_number(INFINITY), "null");
  EXPECT_EQ(format_number(NAN), "null");
}

TEST(Report, DumpLayoutAndRoundTrip) {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({0.25, -1.0});
  j["list"] = Json::array({1, 2, 3, 4});
  j["nested"] = {{"x", nullptr}, {"y", true}};
  j["empty"] = Json::object();
  const auto text = dump_json(j);
  EXPECT_EQ(text,
            "{\n  \"b\": 1,\n  \"a\": [0.25, -1.0],\n  \"list\": [\n    1,\n    2,\n    3,\n    4\n  ],\n"
            "  \"nested\": {\n    \"x\": null,\n    \"y\": true\n  },\n  \"empty\": {}\n}\n");
  EXPECT_EQ(Json::parse(text), j);
  // Keys keep insertion order, so the layout does not depend on key names.
  EXPECT_LT(text.find("\"b\""), text.find("\"a\""));
}

TEST(Report, EnvelopeAndUnwritablePath) {
  const auto r = report_envelope({{"x", 1}});
  auto it = r.begin();
  EXPECT_EQ(it.key(), "tool");
  EXPECT_EQ(r["tool"], "spr-lab");
  EXPECT_EQ(r["version"], SPR_LAB_VERSION);
  EXPECT_THROW(emit_report(r, "/nonexistent-dir/report.json"), IoError);
}
