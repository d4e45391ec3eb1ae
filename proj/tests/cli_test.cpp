#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trimedial/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = trimedial::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(TRIMEDIAL_TEST_DATA) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("trimedial_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("cli check") {
  auto r = run({"check", "--table", data("z3.tbl"), "--name", "medial"});
  CHECK(r.code == 0);
  CHECK(r.out == "holds\n");

  r = run({"check", "--table", data("t4sigma.tbl"), "--name", "medial"});
  CHECK(r.code == 1);
  CHECK(r.out == "counterexample w=0 x=0 y=1 z=0 lhs=3 rhs=0\n");

  r = run({"check", "--table", data("z3.tbl"), "--identity", "x*y = y*x"});
  CHECK(r.code == 0);

  r = run({"check", "--table", data("z3.tbl"), "--identity", "x*y = y*"});
  CHECK(r.code == 2);
  CHECK(r.err.find("dangling") != std::string::npos);

  r = run({"check", "--table", data("z3.tbl")});
  CHECK(r.code == 2);
  r = run({"check", "--table", data("z3.tbl"), "--name", "i1", "--identity", "x=x"});
  CHECK(r.code == 2);
  r = run({"check", "--table", data("missing.tbl"), "--name", "i1"});
  CHECK(r.code == 2);
  r = run({"check", "--table", data("z3.tbl"), "--name", "entropic"});
  CHECK(r.code == 2);
}

TEST_CASE("cli props and closure") {
  auto r = run({"props", "--table", data("const2.tbl")});
  CHECK(r.code == 0);
  CHECK(r.out.find("quasigroup: false\nmedial: holds\n") != std::string::npos);
  CHECK(r.out.find("trimedial: true\n") != std::string::npos);

  r = run({"closure", "--table", data("z3.tbl"), "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "closure {0,1,2}\n");
  r = run({"closure", "--table", data("z3.tbl"), "--seed", "0"});
  CHECK(r.out == "closure {0}\n");
  r = run({"closure", "--table", data("z3.tbl"), "--seed", "5"});
  CHECK(r.code == 2);
}

TEST_CASE("cli enumerate") {
  auto r = run({"enumerate", "--order", "2", "--structure", "quasigroup"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n0 1\n1 0\n\n2\n1 0\n0 1\n");
  r = run({"enumerate", "--order", "4", "--structure", "quasigroup", "--count-only"});
  CHECK(r.out == "count: 576\n");
  r = run({"enumerate", "--order", "7", "--structure", "none", "--count-only"});
  CHECK(r.code == 2);
  r = run({"enumerate", "--order", "2", "--structure", "loop"});
  CHECK(r.code == 2);
}

TEST_CASE("cli search") {
  auto r = run({"search", "--max-order", "4", "--structure", "left", "--satisfies", "i2,i3",
                "--refutes", "i1"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "order: 1 visited: 1 matched: 0\norder: 2 visited: 4 matched: 0\n"
        "order: 3 visited: 216 matched: 0\norder: 4 visited: 331776 matched: 0\n"
        "exhausted: true\nwitnesses: 0\n");

  r = run({"search", "--max-order", "4", "--structure", "quasigroup", "--refutes", "medial",
           "--limit", "3", "--canonical"});
  CHECK(r.code == 1);
  CHECK(r.out.find("exhausted: false\n") != std::string::npos);

  r = run({"search", "--max-order", "3", "--structure", "none", "--satisfies", "bogus"});
  CHECK(r.code == 2);
}

TEST_CASE("cli verify") {
  auto r = run({"verify", "theorem", "--max-order", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("order: 3 visited: 216") != std::string::npos);
  CHECK(r.out.find("result: pass") != std::string::npos);
  r = run({"verify", "theorem", "--max-order", "5"});
  CHECK(r.code == 2);
  r = run({"verify", "equivalences", "--max-order", "3"});
  CHECK(r.code == 0);
  r = run({"verify"});
  CHECK(r.code == 2);
}

TEST_CASE("cli proof") {
  for (const char* name : {"theorem", "corollary-to-i2", "corollary-to-i3"}) {
    auto r = run({"proof", "builtin", name});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict: valid") != std::string::npos);
  }
  auto r = run({"proof", "builtin", "lemma"});
  CHECK(r.code == 2);

  auto bad = temp_file("bad.proof",
                       "given i2\ngiven i3\nstart (x*(x*z))*((x*x)*(y*z))\n"
                       "= (x*(x*x))*((x*z)*(y*z)) by i2\ncancel left\n"
                       "qed (x*x)*(y*z) = (x*y)*(x*z)\n");
  r = run({"proof", "check", bad});
  CHECK(r.code == 1);
  CHECK(r.out.find("invalid at step 1") != std::string::npos);

  auto good = temp_file("good.proof",
                        "given i3\nstart (x*(x*z))*((x*x)*(y*z))\n"
                        "= (x*(x*x))*((x*z)*(y*z)) by i3\n"
                        "qed (x*(x*z))*((x*x)*(y*z)) = (x*(x*x))*((x*z)*(y*z))\n");
  r = run({"proof", "check", good});
  CHECK(r.code == 0);
  CHECK(r.out.find("by i3 rev at . with u=(x*z),v=(y*z),x=x") != std::string::npos);

  auto malformed = temp_file("malformed.proof", "start x\n");
  r = run({"proof", "check", malformed});
  CHECK(r.code == 2);
}

TEST_CASE("cli usage errors") {
  auto r = run({});
  CHECK(r.code == 2);
  CHECK(r.err.find("usage:") != std::string::npos);
  r = run({"frobnicate"});
  CHECK(r.code == 2);
}
