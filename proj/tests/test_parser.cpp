#include "doctest.h"

#include "lang/parser.hpp"
#include "support/random_gen.hpp"

using namespace hcspver;

namespace {

// Random parser-image ASTs: the shapes the grammar can produce.
ProcessPtr random_proc(test_rng& rng, int depth) {
  if (depth == 0 || rng.pick(3) == 0) {
    switch (rng.pick(5)) {
      case 0: return p_skip();
      case 1: return p_assign(rng.varname(), rng.expr(2));
      case 2: return p_input("ch" + std::to_string(rng.pick(3)), rng.varname());
      case 3: return p_output("ch" + std::to_string(rng.pick(3)), rng.expr(2));
      default: return p_wait(rng.expr(1));
    }
  }
  switch (rng.pick(6)) {
    case 0: return p_seq(random_proc(rng, depth - 1), random_proc(rng, depth - 1));
    case 1: return p_ichoice(random_proc(rng, depth - 1), random_proc(rng, depth - 1));
    case 2: return p_repeat(random_proc(rng, depth - 1));
    case 3:
      return p_cond(rng.bexpr(2), random_proc(rng, depth - 1),
                    random_proc(rng, depth - 1));
    case 4: {
      std::vector<OdeEq> eqs{{"x", rng.expr(1)}};
      if (rng.pick(2)) eqs.push_back({"y", rng.expr(1)});
      return p_ode(std::move(eqs), rng.bexpr(1));
    }
    default: {
      std::vector<OdeEq> eqs{{"x", rng.expr(1)}};
      std::vector<CommBranch> comms;
      int n = 1 + (int)rng.pick(2);
      for (int i = 0; i < n; ++i) {
        CommBranch c;
        c.chan = "ch" + std::to_string(rng.pick(3));
        c.is_input = rng.pick(2) == 0;
        if (c.is_input)
          c.var = rng.varname();
        else
          c.expr = rng.expr(1);
        c.cont = random_proc(rng, depth - 1);
        comms.push_back(std::move(c));
      }
      return p_interrupt(std::move(eqs), rng.bexpr(1), random_proc(rng, depth - 1),
                         std::move(comms));
    }
  }
}

const char* kPlant =
    "ch1!v; ch2!p; (ch3?a; <p_dot=v, v_dot=a & true |> skip> |> [] (ch1!v -> "
    "ch2!p))*";

} // namespace

TEST_CASE("atoms parse") {
  CHECK(parse_process("skip")->kind == ProcKind::Skip);
  auto a = parse_process("x := x+1");
  CHECK(a->kind == ProcKind::Assign);
  CHECK(pretty(a) == "x := x + 1");
}

TEST_CASE("the plant model parses and round-trips") {
  auto p = parse_process(kPlant);
  CHECK(p->kind == ProcKind::Seq);
  CHECK(channels(p) == std::set<std::string>{"ch1", "ch2", "ch3"});
  auto again = parse_process(pretty(p));
  CHECK(process_equal(p, again));
}

TEST_CASE("free variable traversal") {
  CHECK(free_vars(p_skip()).empty());
  auto p = parse_process(kPlant);
  CHECK(free_vars(p) == std::set<std::string>{"a", "p", "v"});
}

TEST_CASE("free variables match an independent traversal") {
  test_rng rng(23);
  for (int i = 0; i < 300; ++i) {
    ProcessPtr p = random_proc(rng, 3);
    // second traversal: scan the printed text for identifiers, minus keywords
    // and channels
    std::set<std::string> slow;
    std::string text = pretty(p);
    std::set<std::string> chans = channels(p);
    static const std::set<std::string> keywords{
        "skip", "wait", "if", "then", "else", "endif", "true", "false"};
    for (size_t j = 0; j < text.size();) {
      if (isalpha((unsigned char)text[j]) || text[j] == '_') {
        size_t k = j;
        while (k < text.size() && (isalnum((unsigned char)text[k]) || text[k] == '_'))
          ++k;
        std::string word = text.substr(j, k - j);
        if (word.size() > 4 && word.compare(word.size() - 4, 4, "_dot") == 0)
          word = word.substr(0, word.size() - 4);
        if (!keywords.count(word) && !chans.count(word)) slow.insert(word);
        j = k;
      } else {
        ++j;
      }
    }
    CHECK(free_vars(p) == slow);
  }
}

TEST_CASE("round-trip on random terms") {
  test_rng rng(29);
  for (int i = 0; i < 1200; ++i) {
    ProcessPtr p = random_proc(rng, 1 + (int)rng.pick(5));
    std::string text = pretty(p);
    CAPTURE(text);
    ProcessPtr q = parse_process(text);
    CHECK(process_equal(p, q));
    CHECK(pretty(q) == text); // printing is stable after one pass
  }
}

TEST_CASE("parallel round-trips and stays top-level") {
  auto r = parse_process("a?x ||[a, b] b!1 ||[b] skip");
  CHECK(process_equal(r, parse_process(pretty(r))));

  CHECK_THROWS_AS(parse_process("(a!1 ||[a] b?x); skip"), ParseError);
  CHECK_THROWS_AS(parse_process("(a!1 ||[a] b?x)*"), ParseError);
  CHECK_THROWS_AS(parse_process("if true then a!1 ||[a] b?x else skip endif"),
                  ParseError);
}

TEST_CASE("errors carry positions and expectations") {
  try {
    parse_process("x := ");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
    CHECK(e.line == 1);
  }
  CHECK_THROWS_AS(parse_process("<x_dot=1 & x<5 |> skip>"), ParseError);
  CHECK_THROWS_AS(parse_process("ch?x ?"), ParseError);
}

TEST_CASE("interrupt requires a branch") {
  CHECK_THROWS_AS(p_interrupt({{"x", num(1)}}, btrue(), p_skip(), {}), VerifyError);
}
