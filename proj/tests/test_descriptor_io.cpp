#include <gtest/gtest.h>

#include <filesystem>

#include "iccdec/descriptor_io.hpp"

using namespace iccdec;

namespace {

namespace fs = std::filesystem;

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(ICCDEC_CORPUS_DIR)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string error_of(std::string_view text) {
  try {
    parse_descriptor(text);
  } catch (const DescriptorError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(DescriptorIo, CorpusRoundTrips) {
  const auto files = corpus_files();
  ASSERT_GE(files.size(), 50u);
  for (const auto& f : files) {
    SCOPED_TRACE(f.string());
    const Descriptor d = load_descriptor(f.string());
    const Json j = to_json(d);
    const Descriptor again = parse_descriptor(j.dump());
    EXPECT_EQ(d, again);
    EXPECT_EQ(to_json(again), j);
    EXPECT_NO_THROW(decide(d));
  }
}

TEST(DescriptorIo, DirectoryMatchesType) {
  for (const auto& f : corpus_files()) {
    const Descriptor d = load_descriptor(f.string());
    EXPECT_EQ(std::string(descriptor_type(d)) + "s", f.parent_path().filename().string()) << f;
  }
}

TEST(DescriptorIo, UnknownKeyRejected) {
  EXPECT_EQ(error_of(R"({"schema_version":1,"type":"link","components":2,"colour":"red"})"),
            "/colour: unknown key");
  EXPECT_EQ(error_of(R"({"schema_version":1,"type":"manifold","orientable":true,
                          "pieces":[{"kind":"hyperbolic","volume":2}]})"),
            "/pieces/0/volume: unknown key");
}

TEST(DescriptorIo, NonIntegerRejected) {
  EXPECT_EQ(error_of(R"({"schema_version":1,"type":"knot","torus":[2.5,3]})"),
            "/torus/0: expected an integer");
  EXPECT_EQ(error_of(R"({"schema_version":1,"type":"group","construction":{"cyclic":"6"}})"),
            "/construction/cyclic: expected an integer");
}

TEST(DescriptorIo, SchemaVersionRequired) {
  EXPECT_EQ(error_of(R"({"type":"link","components":2})"),
            "/: missing required key 'schema_version'");
  EXPECT_NE(error_of(R"({"schema_version":2,"type":"link","components":2})"), "");
  EXPECT_EQ(error_of(R"({"schema_version":1,"type":"surface"})").rfind("/type:", 0), 0u);
}

TEST(DescriptorIo, SyntaxErrorPosition) {
  const std::string msg = error_of("{\n  \"schema_version\": 1,\n  \"type\": \"link\",,\n}");
  EXPECT_EQ(msg.rfind("JSON syntax error at line 3, column", 0), 0u) << msg;
  EXPECT_NE(msg.find("(byte "), std::string::npos);
}

TEST(DescriptorIo, ValueChecks) {
  EXPECT_NE(error_of(R"({"schema_version":1,"type":"knot","torus":[2,4]})"), "");
  EXPECT_NE(error_of(R"({"schema_version":1,"type":"knot","torus":[2,3],"hyperbolic":true})"), "");
  EXPECT_NE(error_of(R"({"schema_version":1,"type":"manifold","orientable":true,
                          "pieces":[{"kind":"torus_bundle","monodromy":[[2,0],[0,1]]}]})"),
            "");
  EXPECT_NE(error_of(R"({"schema_version":1,"type":"manifold","orientable":true,"pieces":[]})"), "");
  EXPECT_NE(error_of(R"({"schema_version":1,"type":"group","construction":{"cyclic":0}})"), "");
  EXPECT_THROW(load_descriptor("/nonexistent/descriptor.json"), UsageError);
}

TEST(DescriptorIo, GroupConstructions) {
  const auto d = parse_descriptor(R"({"schema_version":1,"type":"group","construction":
      {"free_product":[{"cyclic":2},{"cyclic":3}]}})");
  const auto g = build_group(std::get<GroupDescriptor>(d));
  EXPECT_TRUE(reduce_word(g, "b^3").is_identity());
  EXPECT_EQ(decide(d).status, Status::ICC);
  const auto s = parse_descriptor(R"({"schema_version":1,"type":"group","construction":
      {"surface":{"genus":2,"orientable":true,"boundary":0}}})");
  EXPECT_FALSE(descriptor_group(s).has_value());
  EXPECT_EQ(decide(s).status, Status::ICC);
}

TEST(DescriptorIo, DescriptorGroupForKnotsAndManifolds) {
  const auto k = parse_descriptor(R"({"schema_version":1,"type":"knot","torus":[2,3]})");
  ASSERT_TRUE(descriptor_group(k).has_value());
  EXPECT_EQ(descriptor_group(k)->kind(), GroupKind::FiberedFreeProduct);
  const auto m = parse_descriptor(R"({"schema_version":1,"type":"manifold","orientable":true,
      "pieces":[{"kind":"torus_bundle","monodromy":[[1,1],[0,1]]}]})");
  ASSERT_TRUE(descriptor_group(m).has_value());
  EXPECT_EQ(descriptor_group(m)->kind(), GroupKind::SemidirectZnByZ);
}
