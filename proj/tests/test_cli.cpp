// End-to-end checks of the command line binary: exit codes, record
// shapes, store round trips, and byte-identical output across worker
// counts.  Takes the binary path as its single argument.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;
std::string bin;
std::filesystem::path scratch;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::filesystem::path out_path = scratch / "stdout.txt";
    std::string cmd =
        bin + " " + args + " > " + out_path.string() + " 2> /dev/null";
    int raw = std::system(cmd.c_str());
    RunResult r;
    if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "ok" : "FAIL") << ": " << what << "\n";
    if (!ok) ++failures;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: test_cli <htpq binary>\n";
        return 2;
    }
    bin = argv[1];
    scratch = std::filesystem::temp_directory_path() / "htpq_cli_scratch";
    std::filesystem::remove_all(scratch);
    std::filesystem::create_directories(scratch);

    RunResult r = run("solve --poly \"x0 - 3\" --ring include: --height 5");
    check(r.code == 0 && contains(r.out, "outcome=found") &&
              contains(r.out, "witness=\"x0=3\""),
          "solve finds the planted integer zero");

    r = run("solve --poly \"x0^2 + 1\" --ring include: --height 5");
    check(r.code == 2 && contains(r.out, "outcome=exhausted"),
          "solve reports exhaustion with exit 2");

    r = run("phi --poly \"5*x0^2 + 5*x1^2 - 1\" --ring residue:3mod4");
    check(r.code == 1 && contains(r.out, "verdict=non-member") &&
              contains(r.out, "exclusion=5"),
          "phi certifies non-membership with the excluded prime");

    r = run("phi --poly \"5*x0^2 + 5*x1^2 - 1\" --ring include:5");
    check(r.code == 0 && contains(r.out, "verdict=member"),
          "phi certifies membership with a witness");

    r = run("oracle quad --poly \"x0^2 + x1^2 - 7\" --ring include:");
    check(r.code == 1 && contains(r.out, "verdict=insolvable") &&
              contains(r.out, "kind=oracle-place"),
          "oracle reports insolvable with per-place reasons");

    r = run("oracle quad --poly \"x0^3 - 2\" --ring include:");
    check(r.code == 2 && contains(r.out, "verdict=not-in-family"),
          "oracle steps aside outside its family");

    r = run("reduce homogenize --poly \"x0^2 - 3\"");
    check(r.code == 0 && contains(r.out, "homogenizer=x1"),
          "homogenize names the fresh variables");

    r = run("reduce semilocal --poly \"x0^2 - 2\" --exclude 5,7 --mock");
    check(r.code == 0 && contains(r.out, "semantics=mock"),
          "semilocal reduction watermarks mock gadgets");

    r = run("reduce semilocal --poly \"x0^2 - 2\" --exclude 6 --mock");
    check(r.code == 3, "composite exclusion is rejected as input error");

    std::filesystem::path store = scratch / "certs.log";
    r = run("--store " + store.string() +
            " certify --poly \"5*x0^2 + 5*x1^2 - 1\" --depth 3 --height 8");
    check(r.code == 0 && contains(r.out, "positive=4") &&
              contains(r.out, "negative=4"),
          "certify emits the full depth-3 partition");
    check(std::filesystem::exists(store) &&
              std::filesystem::exists(store.string() + ".times"),
          "certificates and the timestamp sidecar are persisted apart");

    std::string before;
    {
        std::ifstream in(store);
        std::stringstream ss;
        ss << in.rdbuf();
        before = ss.str();
    }
    check(!contains(before, "stamp"),
          "primary store records carry no timestamps");

    r = run("--store " + store.string() + " store verify");
    check(r.code == 0 && contains(r.out, "clean=1"),
          "freshly written store re-validates clean");

    {
        std::ofstream app(store, std::ios::app);
        app << "kind=positive-cylinder poly=\"x0 - 99\" condition=1 "
               "witness=\"x0=5\" seed=0\n";
        app << "%% not a record\n";
    }
    r = run("--store " + store.string() + " store verify");
    check(r.code == 1 && contains(r.out, "problem=rejected") &&
              contains(r.out, "line=9") &&
              contains(r.out, "problem=corrupt") &&
              contains(r.out, "line=10"),
          "tampered store names the offending lines");

    std::filesystem::path empty_store = scratch / "empty.log";
    write_file(empty_store, "");
    r = run("--store " + empty_store.string() + " store verify");
    check(r.code == 0 && contains(r.out, "records=0"),
          "empty store verifies clean");

    std::string m1 = run("--seed 7 --jobs 1 measure --poly \"5*x0^2 + "
                         "5*x1^2 - 1\" --height 10 --samples 400")
                         .out;
    std::string m4 = run("--seed 7 --jobs 4 measure --poly \"5*x0^2 + "
                         "5*x1^2 - 1\" --height 10 --samples 400")
                         .out;
    std::string m8 = run("--seed 7 --jobs 8 measure --poly \"5*x0^2 + "
                         "5*x1^2 - 1\" --height 10 --samples 400")
                         .out;
    check(!m1.empty() && m1 == m4 && m1 == m8,
          "seeded measure output is byte-identical across 1, 4, 8 workers");

    r = run("measure --poly \"x0 - 1\" --height 5 --samples 10");
    check(r.code == 3, "measure without a seed is an input error");

    r = run("--seed 2 measure --poly \"5*x0^2 + 5*x1^2 - 1\" --height 8 "
            "--samples 50 --exact-family --depth 3");
    check(r.code == 0 && contains(r.out, "exact=1/2") &&
              contains(r.out, "gap=0"),
          "measure reports the exact family value and a closed gap");

    std::filesystem::path cfg = scratch / "flags.cfg";
    write_file(cfg, "seed=7\njobs=4\n");
    std::string mc = run("--config " + cfg.string() +
                         " measure --poly \"5*x0^2 + 5*x1^2 - 1\" "
                         "--height 10 --samples 400")
                         .out;
    check(mc == m1, "config file mirrors the global flags");

    r = run("encode --poly \"x0^2 - 3\"");
    std::string code_line = r.out;
    std::size_t at = code_line.find("code=");
    std::string code;
    if (at != std::string::npos) {
        at += 5;
        while (at < code_line.size() && isdigit(code_line[at]))
            code += code_line[at++];
    }
    check(r.code == 0 && !code.empty(), "encode prints a natural number");
    r = run("decode --number " + code);
    check(r.code == 0 && contains(r.out, "poly=\"x0^2 - 3\""),
          "decode restores the polynomial exactly");

    r = run("solve --poly \"x0 +* 3\" --ring include: --height 5");
    check(r.code == 3, "malformed polynomial text is an input error");

    r = run("solve --poly \"x0 - 3\" --ring nonsense: --height 5");
    check(r.code == 3, "malformed descriptor is an input error");

    r = run("probe --poly \"5*x0^2 + 5*x1^2 - 1\" --ring exclude:5 "
            "--depth 3 --height 8");
    check(r.code == 1 && contains(r.out, "verdict=complement-interior"),
          "probe lands in the complement interior with exit 1");

    std::filesystem::path model = scratch / "model.txt";
    write_file(model,
               "n = 1\nh = 0\nh_plus = x0 + x1 - x2\nh_times = x0*x1 - x2\n");
    r = run("model-check --spec " + model.string() +
            " --ring include: --range 3 --height 12");
    check(r.code == 0 && contains(r.out, "refuted=0") &&
              contains(r.out, "complete=1"),
          "identity model checks out over the integers");

    std::filesystem::path probes = scratch / "probes.txt";
    write_file(probes, "# integer probes\n0\n1\n-2\n");
    r = run("exdef-check --g \"0\" --ring include: --probes " +
            probes.string() + " --height 6");
    check(r.code == 0 && contains(r.out, "refuted=0"),
          "trivial definition is consistent on integer probes");

    write_file(probes, "1/2\n");
    r = run("exdef-check --g \"0\" --ring include:2 --probes " +
            probes.string() + " --height 6");
    check(r.code == 1 && contains(r.out, "refuted=1"),
          "trivial definition is refuted by a half-integer probe");

    r = run("");
    check(r.code == 3, "missing subcommand is an input error");

    std::cout << (failures == 0 ? "all cli checks passed"
                                : std::to_string(failures) + " failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
