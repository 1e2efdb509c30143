#include <lieflow/lieflow.hpp>

#include <gtest/gtest.h>

#include <string>

using namespace lieflow;

namespace {

std::string data(const std::string& rel) { return std::string(LIEFLOW_DATA_DIR) + "/" + rel; }

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(AlgebraIo, DataFilesMatchBuiltins) {
  const auto h = load_algebra(data("algebras/heisenberg3.alg"));
  EXPECT_EQ(h.algebra.labels(), algebras::heisenberg3().labels());
  EXPECT_LT((h.algebra.ad(Vec::Ones(3)) - algebras::heisenberg3().ad(Vec::Ones(3))).norm(), 0.0 + 1e-15);
  EXPECT_TRUE(h.matrix_basis.empty());

  const auto s = load_algebra(data("algebras/sl2.alg"));
  ASSERT_EQ(s.matrix_basis.size(), 3u);
  EXPECT_LT((s.algebra.killing_form() - algebras::sl2().killing_form()).norm(), 1e-15);
  EXPECT_EQ(s.matrix_basis[1], groups::sl2_chart().matrix_basis()[1]);

  const auto o = load_algebra(data("algebras/so3.alg"));
  const auto chart = GroupChart::matrix_embedded(o.algebra, o.matrix_basis, 1.5);
  EXPECT_EQ(chart.dim(), 3);
  EXPECT_EQ(load_algebra(data("algebras/plane.alg")).algebra.dim(), 2);
}

TEST(AlgebraIo, ParseErrorsCarryLineNumbers) {
  EXPECT_NE(error_of([] { parse_algebra("dim 2\nc 0 1 5 1\n"); }).find("line 2"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("c 0 1 2 1\n"); }).find("line 1"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("dim 3\nc 0 1 2 1\nc 1 0 2 1\n"); }).find("conflicting"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("dim 2\nfoo 1\n"); }).find("unknown directive"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("dim 2 3\n"); }).find("trailing"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("# nothing\n"); }).find("no 'dim'"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("dim 2\nm 0 0 0 1\n"); }).find("'size'"), std::string::npos);
  EXPECT_NE(error_of([] { parse_algebra("dim 2\nlabels a\n"); }).find("label count"), std::string::npos);
}

TEST(AlgebraIo, AntisymmetricPartnerIsFilled) {
  const auto a = parse_algebra("dim 3 # h3\nc 0 1 2 1\nc 1 0 2 -1\n").algebra;
  Vec x = Vec::Zero(3), y = Vec::Zero(3);
  x(0) = y(1) = 1;
  EXPECT_EQ(a.bracket(y, x)(2), -1.0);
}

TEST(AlgebraIo, JacobiViolationRejected) {
  EXPECT_THROW(parse_algebra("dim 3\nc 0 1 1 3\nc 0 2 2 -2\nc 1 2 0 1\n"), InputError);
}

TEST(MatrixIo, ParseMatrix) {
  const Mat m = parse_matrix("# comment\n1 2\n\n3 4 # trailing\n");
  EXPECT_EQ(m, (Mat(2, 2) << 1, 2, 3, 4).finished());
  EXPECT_THROW(parse_matrix("1 2\n3\n"), InputError);
  EXPECT_THROW(parse_matrix("1 x\n"), InputError);
  EXPECT_THROW(parse_matrix("\n"), InputError);
  EXPECT_THROW(load_matrix(data("matrices/missing.txt")), InputError);
  EXPECT_EQ(load_matrix(data("matrices/heis_saddle.txt")).rows(), 3);
}

TEST(Catalog, FileCopyMatchesBuiltin) {
  const auto file = parse_catalog(detail::read_text(data("catalog.cfg")));
  ASSERT_EQ(file.size(), catalog().size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    EXPECT_EQ(file[i].name, catalog()[i].name);
    EXPECT_EQ(file[i].eps, catalog()[i].eps);
    EXPECT_EQ(file[i].window.lo, catalog()[i].window.lo);
  }
}

TEST(Catalog, RejectsMalformedSections) {
  const std::string base = "[s]\nalgebra = abelian2\nchart = abelian\nwindow = 1\nspacing = 0.1\neps = 0.1\ntau = 1\nexpected = all\n";
  EXPECT_NO_THROW(parse_catalog(base + "derivation = 1 0; 0 -1\n"));
  EXPECT_NE(error_of([&] { parse_catalog(base); }).find("exactly one"), std::string::npos);
  EXPECT_NE(error_of([&] { parse_catalog(base + "derivation = 1 0; 0 -1\ncolour = red\n"); }).find("unknown key"),
            std::string::npos);
  EXPECT_NE(error_of([&] { parse_catalog(base + "derivation = 1 0; 0\n"); }).find("unequal"), std::string::npos);
  EXPECT_NE(error_of([&] { parse_catalog("[t]\nchart = abelian\n"); }).find("missing 'algebra'"), std::string::npos);
  EXPECT_NE(error_of([&] { parse_catalog("eps = 1\n"); }).find("inside a section"), std::string::npos);
  EXPECT_THROW(parse_catalog(base + "inner = 1 0\n"), UnsupportedError);
}

TEST(Catalog, FileAlgebraPathsResolve) {
  const std::string text = "[h]\nalgebra = " + data("algebras/heisenberg3.alg") +
                           "\nchart = nilpotent-exp\nderivation = 1 0 0; 0 -1 0; 0 0 0\nwindow = 1\nspacing = 0.25\n"
                           "eps = 0.2\ntau = 1\nexpected = central\n";
  const auto cat = parse_catalog(text);
  ASSERT_EQ(cat.size(), 1u);
  EXPECT_EQ(cat[0].make_flow().chart().dim(), 3);
}

TEST(Window, ParseForms) {
  const Window a = parse_window({2.0}, 2);
  EXPECT_EQ(a.lo, Vec::Constant(2, -2));
  const Window b = parse_window({-1.0, 3.0}, 3);
  EXPECT_EQ(b.hi, Vec::Constant(3, 3));
  const Window c = parse_window({-2, 2, -1, 1}, 2);
  EXPECT_EQ(c.lo(1), -1.0);
  EXPECT_EQ(c.hi(0), 2.0);
  EXPECT_THROW(parse_window({1, 2, 3}, 2), InputError);
  EXPECT_THROW(parse_window({-1.0}, 2), InputError);
}
