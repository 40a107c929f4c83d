#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fragmap/fragmap.h"

namespace {

std::string temp_path(const char* name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("abi version is positive")
{
    CHECK(fragmap_abi_version() >= 1);
}

TEST_CASE("generate, save, load, solve through the C surface")
{
    fragmap_instance* inst = nullptr;
    REQUIRE(fragmap_instance_generate(5, 12, 50, 51, 424242, &inst) == FRAGMAP_OK);
    CHECK(fragmap_instance_query_size(inst) == 5);
    CHECK(fragmap_instance_target_size(inst) == 12);
    CHECK(fragmap_instance_delta(inst) == 51);
    CHECK(fragmap_instance_default_nlink(inst) == 0);
    CHECK(fragmap_instance_score(inst, 0, 0) >= 1);
    CHECK(fragmap_instance_score(inst, 0, 12) == -1); // out of range

    std::string path = temp_path("fragmap_capi_roundtrip.json");
    REQUIRE(fragmap_instance_save(inst, path.c_str()) == FRAGMAP_OK);

    fragmap_instance* loaded = nullptr;
    REQUIRE(fragmap_instance_load(path.c_str(), &loaded) == FRAGMAP_OK);
    CHECK(fragmap_instance_query_size(loaded) == 5);

    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.nlink = 3;
    fragmap_solutions* sols = nullptr;
    REQUIRE(fragmap_solve(loaded, &opts, &sols) == FRAGMAP_OK);
    REQUIRE(fragmap_solutions_outcome(sols) == FRAGMAP_PROVEN_OPTIMAL);
    REQUIRE(fragmap_solutions_count(sols) == 1);
    CHECK(fragmap_solutions_cost(sols, 0) >= 3); // three real scores >= 1 each
    CHECK(fragmap_solutions_backtracks(sols) >= 0);

    int mapping[5];
    REQUIRE(fragmap_solutions_mapping(sols, 0, mapping, 5) == FRAGMAP_OK);
    int mapped = 0;
    for (int v : mapping)
        mapped += v >= 0;
    CHECK(mapped == 3);

    // the two runs agree: solving the saved copy must give the same cost
    fragmap_solutions* sols2 = nullptr;
    REQUIRE(fragmap_solve(inst, &opts, &sols2) == FRAGMAP_OK);
    CHECK(fragmap_solutions_cost(sols2, 0) == fragmap_solutions_cost(sols, 0));

    fragmap_solutions_free(sols);
    fragmap_solutions_free(sols2);
    fragmap_instance_free(loaded);
    fragmap_instance_free(inst);
    std::filesystem::remove(path);
}

TEST_CASE("error paths set a readable message")
{
    fragmap_instance* inst = nullptr;
    CHECK(fragmap_instance_load("/no/such/fragmap-file.json", &inst) == FRAGMAP_ERR_IO);
    CHECK(std::strlen(fragmap_last_error()) > 0);

    CHECK(fragmap_instance_generate(5, 3, 10, 11, 1, &inst) == FRAGMAP_ERR_INVALID);

    REQUIRE(fragmap_instance_generate(3, 6, 10, 11, 1, &inst) == FRAGMAP_OK);
    fragmap_solutions* sols = nullptr;
    // no nlink given and no default stored
    CHECK(fragmap_solve(inst, nullptr, &sols) == FRAGMAP_ERR_INVALID);

    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.nlink = 2;
    REQUIRE(fragmap_solve(inst, &opts, &sols) == FRAGMAP_OK);
    int small[1];
    CHECK(fragmap_solutions_mapping(sols, 0, small, 1) == FRAGMAP_ERR_INVALID);
    CHECK(fragmap_solutions_mapping(sols, 9, small, 1) == FRAGMAP_ERR_INVALID);
    fragmap_solutions_free(sols);

    // a fixed association whose score breaks the threshold
    int fixed[] = {0, 0};
    opts.fixed = fixed;
    opts.fixed_count = 1;
    int score = fragmap_instance_score(inst, 0, 0);
    fragmap_instance_free(inst);
    REQUIRE(fragmap_instance_generate(3, 6, 10, score, 1, &inst) == FRAGMAP_OK); // delta == score
    CHECK(fragmap_solve(inst, &opts, &sols) == FRAGMAP_ERR_INVALID);
    fragmap_instance_free(inst);
}

TEST_CASE("all-optimal and diverse through the C surface")
{
    fragmap_instance* inst = nullptr;
    REQUIRE(fragmap_instance_generate(6, 10, 12, 13, 77, &inst) == FRAGMAP_OK);

    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.nlink = 3;

    fragmap_solutions* all = nullptr;
    REQUIRE(fragmap_solve_all_optimal(inst, &opts, &all) == FRAGMAP_OK);
    if (fragmap_solutions_outcome(all) == FRAGMAP_PROVEN_OPTIMAL) {
        REQUIRE(fragmap_solutions_count(all) >= 1);
        long best = fragmap_solutions_cost(all, 0);
        for (int i = 0; i < fragmap_solutions_count(all); ++i)
            CHECK(fragmap_solutions_cost(all, i) == best);
    }
    fragmap_solutions_free(all);

    fragmap_solutions* div = nullptr;
    REQUIRE(fragmap_diverse(inst, &opts, 3, 0, 10, 0, &div) == FRAGMAP_OK);
    int count = fragmap_solutions_count(div);
    CHECK(count <= 3);
    if (count > 0) {
        CHECK(fragmap_solutions_distance(div, 0) == -1);
        for (int i = 1; i < count; ++i) {
            CHECK(fragmap_solutions_distance(div, i) >= 0);
            CHECK(fragmap_solutions_hamming_to_first(div, i) >= 0);
        }
    }
    fragmap_solutions_free(div);

    fragmap_solutions* oracle_set = nullptr;
    REQUIRE(fragmap_oracle_feasible_set(inst, 3, &oracle_set) == FRAGMAP_OK);
    if (fragmap_solutions_count(oracle_set) > 0) {
        // the oracle's first entry is its optimum; compare with the solver
        fragmap_solutions* solved = nullptr;
        REQUIRE(fragmap_solve(inst, &opts, &solved) == FRAGMAP_OK);
        CHECK(fragmap_solutions_cost(solved, 0) == fragmap_solutions_cost(oracle_set, 0));
        fragmap_solutions_free(solved);
    }
    fragmap_solutions_free(oracle_set);
    fragmap_instance_free(inst);
}

TEST_CASE("histogram-built instances solve")
{
    std::string qpath = temp_path("fragmap_capi_qh.json");
    std::string tpath = temp_path("fragmap_capi_th.json");
    auto write_hists = [](const std::string& path, int count, int scale) {
        std::string body = "[";
        for (int id = 0; id < count; ++id) {
            body += std::string(id ? "," : "") + "{\"id\": " + std::to_string(id)
                + ", \"bins\": [";
            for (int b = 0; b < 32; ++b)
                body += std::string(b ? "," : "") + std::to_string((id + 1) * scale + b);
            body += "]}";
        }
        body += "]";
        std::ofstream(path) << body;
    };
    write_hists(qpath, 2, 10);
    write_hists(tpath, 3, 12);

    fragmap_instance* inst = nullptr;
    REQUIRE(fragmap_instance_from_histograms(qpath.c_str(), tpath.c_str(), "0-1", "0-1,1-2",
                                             100000, &inst) == FRAGMAP_OK);
    CHECK(fragmap_instance_query_size(inst) == 2);
    CHECK(fragmap_instance_target_size(inst) == 3);

    fragmap_options opts;
    fragmap_options_init(&opts);
    opts.nlink = 2;
    fragmap_solutions* sols = nullptr;
    REQUIRE(fragmap_solve(inst, &opts, &sols) == FRAGMAP_OK);
    CHECK(fragmap_solutions_outcome(sols) == FRAGMAP_PROVEN_OPTIMAL);
    fragmap_solutions_free(sols);
    fragmap_instance_free(inst);
    std::filesystem::remove(qpath);
    std::filesystem::remove(tpath);
}
