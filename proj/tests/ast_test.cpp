#include "gtlc/ast.hpp"

#include "support.hpp"

namespace gtlc {
namespace {

using testing::con;

TEST(Flip, SwapsPolarities) {
  EXPECT_EQ(flip(Polarity::Pos), Polarity::Neg);
  EXPECT_EQ(flip(Polarity::Neg), Polarity::Pos);
}

TEST(Flip, IsAnInvolution) {
  for (auto s : {Polarity::Pos, Polarity::Neg}) EXPECT_EQ(flip(flip(s)), s);
}

TEST(StructurallyEqual, RenamesBoundIdentifiers) {
  EXPECT_TRUE(structurally_equal(*con("(λ (x) x)"), *con("(λ (y) y)")));
  EXPECT_TRUE(structurally_equal(*con("(let [a 1] (λ (b) a))"), *con("(let [c 1] (λ (d) c))")));
}

TEST(StructurallyEqual, DistinguishesBindingStructure) {
  EXPECT_FALSE(structurally_equal(*con("(λ (x) (λ (y) x))"), *con("(λ (x) (λ (y) y))")));
  EXPECT_FALSE(structurally_equal(*con("(λ (x) x)"), *con("(λ (x) y)")));
}

TEST(StructurallyEqual, DistinguishesPrimitives) {
  EXPECT_FALSE(structurally_equal(*con("int?"), *con("bool?")));
}

TEST(StructurallyEqual, ComparesMonitorParties) {
  EXPECT_FALSE(structurally_equal(*con("(mon (t1 u1) int? 5)"), *con("(mon (t1 u2) int? 5)")));
  EXPECT_TRUE(structurally_equal(*con("(mon (t1 u1) int? 5)"), *con("(mon (t1 u1) int? 5)")));
  EXPECT_FALSE(structurally_equal(*con("(mon (t1 u1) int? 5)"), *con("(mon (t1 u1) bool? 5)")));
}

TEST(StructurallyEqual, FreeIdentifiersCompareByName) {
  EXPECT_TRUE(structurally_equal(*con("(f x)"), *con("(f x)")));
  EXPECT_FALSE(structurally_equal(*con("(f x)"), *con("(g x)")));
}

TEST(Contract, EqualityIsStructural) {
  const auto a = Contract::arrow(Contract::flat_int(), Contract::any());
  const auto b = Contract::arrow(Contract::flat_int(), Contract::any());
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == Contract::arrow(Contract::any(), Contract::flat_int()));
  EXPECT_FALSE(Contract::flat_int() == Contract::flat_bool());
}

TEST(Paths, AddressChildrenInOrder) {
  const auto e = con("(let [x (mon (a b) int? 1)] (if x (f 2) 3))");
  EXPECT_TRUE(at_path(*e, {0}).as<con::Mon>());
  EXPECT_TRUE(at_path(*e, {0, 0}).as<con::IntLit>());
  EXPECT_TRUE(at_path(*e, {1, 1, 0}).as<con::Var>());
  EXPECT_THROW(at_path(*e, {2}), std::out_of_range);
}

TEST(Paths, ReplaceRebuildsOnlyTheSpine) {
  const auto e = con("(let [x 1] (f x))");
  const auto r = replace_at(e, {1, 1}, con("2"));
  EXPECT_TRUE(testing::alpha_equal(r, con("(let [x 1] (f 2))")));
  EXPECT_EQ(children(*r)[0], children(*e)[0]);
}

TEST(CountMonitors, CountsNestedMonitors) {
  EXPECT_EQ(count_monitors(*con("(mon (a b) (-> int? int?) (mon (c d) int? 1))")), 2u);
  EXPECT_EQ(count_monitors(*con("(λ (x) x)")), 0u);
}

}  // namespace
}  // namespace gtlc
