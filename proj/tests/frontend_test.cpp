#include "gtlc/frontend.hpp"

#include "gtlc/sexpr.hpp"
#include "support.hpp"

namespace gtlc {
namespace {

using testing::kRunning;

bool has_kind(const std::vector<Diagnostic>& ds, Diagnostic::Kind k) {
  for (const auto& d : ds) {
    if (d.kind == k) return true;
  }
  return false;
}

SurfacePtr surface_body(const std::string& module_text) {
  auto p = parse_program(module_text);
  if (!p) throw std::invalid_argument("fixture does not parse");
  return p->modules.front().body;
}

TEST(ParseProgram, RunningExampleShape) {
  auto p = parse_program(kRunning);
  ASSERT_TRUE(p);
  ASSERT_EQ(p->modules.size(), 4u);
  const auto& t1 = p->modules[0];
  EXPECT_EQ(t1.name.name, "t1");
  ASSERT_TRUE(t1.typed());
  EXPECT_EQ(*t1.annotation, Ty::arrow(Ty::integer(), Ty::integer()));
  for (std::size_t i : {1u, 2u}) {
    EXPECT_FALSE(p->modules[i].typed());
    ASSERT_EQ(p->modules[i].imports.size(), 1u);
    EXPECT_EQ(p->modules[i].imports[0].target.name, "t1");
  }
  EXPECT_EQ(p->modules[3].name.name, "main");
  EXPECT_EQ(p->modules[3].imports[0].target.name, "u2");
}

TEST(ParseProgram, SmallestProgram) {
  auto p = parse_program("(module main 5)");
  ASSERT_TRUE(p);
  ASSERT_EQ(p->modules.size(), 1u);
  ASSERT_TRUE(p->modules[0].body->as<surface::IntLit>());
  EXPECT_EQ(p->modules[0].body->as<surface::IntLit>()->value, 5);
}

TEST(ParseProgram, UnbalancedParenIsAParseError) {
  auto p = parse_program("(module main (5");
  ASSERT_FALSE(p);
  EXPECT_EQ(p.diagnostics.front().kind, Diagnostic::Kind::Parse);
  EXPECT_LE(p.diagnostics.front().span.end, std::string("(module main (5").size());
}

TEST(ParseProgram, RejectsMalformedForms) {
  EXPECT_FALSE(parse_program("(module)"));
  EXPECT_FALSE(parse_program("(module main (λ (x y) x))"));
  EXPECT_FALSE(parse_program("(module main (if 1 2))"));
  EXPECT_FALSE(parse_program("(module main (f 1 2))"));
  EXPECT_FALSE(parse_program("(module main ())"));
  EXPECT_FALSE(parse_program("(module 5 1)"));
  EXPECT_FALSE(parse_program("(module main (λ (if) 1))"));
  EXPECT_FALSE(parse_program("(module main 1])"));
}

TEST(ParseProgram, AcceptsCommentsAndBrackets) {
  auto p = parse_program("; leading comment\n(module main [λ (x) x]) ; trailing\n");
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->modules[0].body->as<surface::Lambda>());
}

TEST(ParseProgram, IntegersAreArbitraryPrecision) {
  auto p = parse_program("(module main -123456789012345678901234567890)");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->modules[0].body->as<surface::IntLit>()->value, Integer("-123456789012345678901234567890"));
}

TEST(ParseProgram, PrintedFormReparses) {
  const char* texts[] = {
      kRunning,
      "(module main 5)",
      "(module a Bool (opaque-require b Int) #t)\n(module main (opaque-require a) a)",
      "(module f (-> (-> Int Bool) Int) (λ (g : (-> Int Bool)) (if (g 1) 1 0)))\n"
      "(module main (require f) (f (λ (x) (bool? x))))",
  };
  for (const char* text : texts) {
    auto p = parse_program(text);
    ASSERT_TRUE(p) << text;
    auto again = parse_program(print(*p));
    ASSERT_TRUE(again) << print(*p);
    EXPECT_TRUE(structurally_equal(*p, *again)) << print(*p);
  }
}

TEST(Lexical, Identifiers) {
  EXPECT_TRUE(is_identifier("x"));
  EXPECT_TRUE(is_identifier("count-from!"));
  EXPECT_TRUE(is_identifier("_"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier("a.b"));
  EXPECT_TRUE(is_reserved("int?"));
  EXPECT_TRUE(is_reserved("opaque"));
  EXPECT_FALSE(is_reserved("main"));
}

TEST(TyEnv, PlainRequireOfTypedModule) {
  auto p = parse_program(kRunning);
  auto env = ty_env(std::vector{Require::plain("t1")}, p->modules);
  ASSERT_TRUE(env);
  ASSERT_EQ(env->size(), 1u);
  EXPECT_EQ((*env)[0].first, "t1");
  EXPECT_EQ((*env)[0].second, Ty::arrow(Ty::integer(), Ty::integer()));
}

TEST(TyEnv, Empty) {
  auto env = ty_env({}, {});
  ASSERT_TRUE(env);
  EXPECT_TRUE(env->empty());
}

TEST(TyEnv, TypedImportOfUntypedModule) {
  auto p = parse_program("(module u9 5)");
  auto env = ty_env(std::vector{Require::typed("u9", Ty::integer())}, p->modules);
  ASSERT_TRUE(env);
  EXPECT_EQ((*env)[0].first, "u9");
  EXPECT_EQ((*env)[0].second, Ty::integer());
}

TEST(TyEnv, KindMismatches) {
  auto p = parse_program("(module u 5)\n(module t Int 5)");
  auto a = ty_env(std::vector{Require::plain("u")}, p->modules);
  ASSERT_FALSE(a);
  EXPECT_EQ(a.diagnostics[0].kind, Diagnostic::Kind::RequireKindMismatch);
  auto b = ty_env(std::vector{Require::typed("t", Ty::integer())}, p->modules);
  ASSERT_FALSE(b);
  EXPECT_EQ(b.diagnostics[0].kind, Diagnostic::Kind::RequireKindMismatch);
}

TEST(NameEnv, Examples) {
  auto p = parse_program(kRunning);
  auto env = name_env(std::vector{Require::plain("t1")}, p->modules);
  ASSERT_TRUE(env);
  EXPECT_EQ(*env, NameEnv{"t1"});
  auto empty = name_env({}, p->modules);
  ASSERT_TRUE(empty);
  EXPECT_TRUE(empty->empty());
  auto ghost = name_env(std::vector{Require::plain("ghost")}, p->modules);
  ASSERT_FALSE(ghost);
  EXPECT_EQ(ghost.diagnostics[0].kind, Diagnostic::Kind::Unbound);
}

TEST(Typecheck, IdentityFunction) {
  auto t = typecheck_expr({}, *surface_body("(module m (-> Int Int) (λ (x : Int) x))"));
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Ty::arrow(Ty::integer(), Ty::integer()));
}

TEST(Typecheck, ApplicationOfImport) {
  TypeEnv env{{"t1", Ty::arrow(Ty::integer(), Ty::integer())}};
  auto t = typecheck_expr(env, *surface_body("(module m Int (t1 5))"));
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Ty::integer());
}

TEST(Typecheck, ConditionalNeedsBooleanTest) {
  auto t = typecheck_expr({}, *surface_body("(module m Int (if 1 2 3))"));
  ASSERT_FALSE(t);
  EXPECT_EQ(t.diagnostics[0].kind, Diagnostic::Kind::TypeError);
}

TEST(Typecheck, BranchesMustAgree) {
  EXPECT_FALSE(typecheck_expr({}, *surface_body("(module m Int (if #t 2 #f))")));
}

TEST(Typecheck, OpaqueTakesTheExpectedType) {
  const Ty want = Ty::arrow(Ty::integer(), Ty::integer());
  auto t = typecheck_expr({}, *surface_body("(module m (-> Int Int) opaque)"), want);
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, want);
}

TEST(Typecheck, PrimitivesAcceptAnyArgument) {
  auto t = typecheck_expr({}, *surface_body("(module m Bool (int? (λ (x : Bool) x)))"));
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Ty::boolean());
}

TEST(Typecheck, UnannotatedLambdaIsRejected) {
  EXPECT_FALSE(typecheck_expr({}, *surface_body("(module m (-> Int Int) (λ (x) x))")));
}

TEST(Typecheck, ShadowingUsesTheInnerBinding) {
  TypeEnv env{{"x", Ty::boolean()}};
  auto t = typecheck_expr(env, *surface_body("(module m (-> Int Int) (λ (x : Int) x))"));
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Ty::arrow(Ty::integer(), Ty::integer()));
}

TEST(Wellformed, RunningExampleIsOk) { EXPECT_TRUE(check_wellformed(*parse_program(kRunning)).empty()); }

TEST(Wellformed, ForwardRequireIsUnbound) {
  auto ds = check_wellformed(*parse_program(
      "(module u1 (require t1) (t1 5))\n(module t1 (-> Int Int) (λ (x : Int) x))\n(module main 0)"));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::Unbound));
}

TEST(Wellformed, AnnotationMismatchIsATypeError) {
  auto ds = check_wellformed(*parse_program("(module t Bool 5)\n(module main 0)"));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::TypeError));
}

TEST(Wellformed, ReportsEveryProblem) {
  auto ds = check_wellformed(*parse_program("(module t Bool 5)\n(module t 1)\n(module u (require ghost) x)"));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::TypeError));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::DuplicateModule));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::Unbound));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::MainMissing));
}

TEST(Wellformed, MainMustExistAndBeUntyped) {
  EXPECT_TRUE(has_kind(check_wellformed(*parse_program("")), Diagnostic::Kind::MainMissing));
  EXPECT_TRUE(has_kind(check_wellformed(*parse_program("(module main Int 5)")), Diagnostic::Kind::TypeError));
}

TEST(Wellformed, UntypedBodiesMustBeClosed) {
  auto ds = check_wellformed(*parse_program("(module main (λ (x) y))"));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::Unbound));
}

TEST(Wellformed, UntypedModulesUsePlainRequires) {
  auto ds = check_wellformed(*parse_program("(module a 1)\n(module main (require/typed a Int) a)"));
  EXPECT_TRUE(has_kind(ds, Diagnostic::Kind::RequireKindMismatch));
}

TEST(Diagnostics, FormatResolvesLineAndColumn) {
  const std::string text = "(module main\n  (5";
  auto p = parse_program(text);
  ASSERT_FALSE(p);
  const std::string line = format(p.diagnostics.front(), text, "f.gtl");
  EXPECT_EQ(line.rfind("f.gtl:", 0), 0u) << line;
  EXPECT_NE(line.find("parse"), std::string::npos) << line;
}

TEST(ParseCon, ReadsPrintedContractPrograms) {
  auto e = parse_con("(let [t1 (λ (x) x)] (mon (t1 u1) (-> int? any/c) t1))");
  ASSERT_TRUE(e);
  auto again = parse_con(print(**e));
  ASSERT_TRUE(again);
  EXPECT_TRUE(structurally_equal(**e, **again));
  EXPECT_TRUE(parse_con("(blame u2 t1)"));
  EXPECT_FALSE(parse_con("(mon int? 5)"));
}

}  // namespace
}  // namespace gtlc
