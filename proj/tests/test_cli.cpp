#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aalsim/csv.hpp"
#include "aalsim/experiment.hpp"

namespace fs = std::filesystem;

namespace {

int run_sim(const std::string& args)
{
    const std::string cmd = std::string(SIM_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "aalsim_cli_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text)
{
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("sim run writes the same CSV as the library")
{
    const auto cfg = write_file("ok.cfg", "n = 10\nreplicates = 2\nseed = 5\nsweep.n = 10,12\n");
    const auto out = scratch_dir() / "ok.csv";
    CHECK(run_sim("run " + cfg.string() + " --out " + out.string()) == 0);
    const auto spec = aalsim::single_point(aalsim::parse_config(slurp(cfg)));
    CHECK(slurp(out) == aalsim::emit_csv(aalsim::run_experiment_serial(spec)));
}

TEST_CASE("sim sweep honours --seed and --replicates")
{
    const auto cfg = write_file("sweep.cfg", "n = 8\nsweep.provider_rate = 0.2,0.4\n");
    const auto out = scratch_dir() / "sweep.csv";
    CHECK(run_sim("sweep " + cfg.string() + " --seed 9 --replicates 2 -o " + out.string()) == 0);
    auto spec = aalsim::parse_config(slurp(cfg));
    spec.master_seed = 9;
    spec.replicates = 2;
    CHECK(slurp(out) == aalsim::emit_csv(aalsim::run_experiment_serial(spec)));
}

TEST_CASE("sim exit codes")
{
    const auto bad = write_file("bad.cfg", "p_client = 0.6\np_provider = 0.6\np_neutral = 0.5\n");
    CHECK(run_sim("run " + bad.string()) == 1);
    CHECK(run_sim("run " + (scratch_dir() / "missing.cfg").string()) == 1);
    CHECK(run_sim("preset fig42") == 1);
    CHECK(run_sim("frobnicate") == 1);
    CHECK(run_sim("") == 1);
    CHECK(run_sim("preset fig6 --print-config") == 0);

    // Output into a directory that does not exist is a runtime failure.
    const auto ok = write_file("tiny.cfg", "n = 4\nreplicates = 1\n");
    CHECK(run_sim("run " + ok.string() + " --out /nonexistent/dir/x.csv") == 2);
}

TEST_CASE("sim snapshot dumps n*n cells")
{
    const auto cfg = write_file("snap.cfg", "n = 6\nseed = 3\n");
    const auto out = scratch_dir() / "snap.csv";
    CHECK(run_sim("snapshot " + cfg.string() + " --steps 2 --out " + out.string()) == 0);
    CHECK(aalsim::read_csv(slurp(out)).size() == 37);
}
