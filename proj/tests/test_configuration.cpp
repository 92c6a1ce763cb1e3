#include <doctest.h>

#include "cpmx/configuration.hpp"
#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/secondary.hpp"
#include "cpmx/validate.hpp"
#include "support/build.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace cpmx;
using cpmx::testing::load_fixture;
using cpmx::testing::ModelBuilder;
using cpmx::testing::variant;
using cpmx::testing::vp;

namespace {

Configuration select(std::initializer_list<std::pair<std::string, std::optional<std::string>>> pairs) {
    Configuration config;
    for (const auto& [vp_id, choice] : pairs) config.selection[vp_id] = choice;
    return config;
}

bool variability_free(const Model& m) {
    for (const auto& [id, a] : m.activities)
        if (!is_plain(a.role)) return false;
    for (const auto& [id, r] : m.resources)
        if (!is_plain(r.role)) return false;
    for (const auto& [id, d] : m.data_objects)
        if (!is_plain(d.role)) return false;
    return true;
}

} // namespace

TEST_CASE("selection rules") {
    Model m = cpmx::testing::tiny_vp_model(); // A alternative {A1, A2}

    CHECK(check_selection(m, select({{"A", "A1"}})).empty());

    auto none_chosen = check_selection(m, select({{"A", std::nullopt}}));
    REQUIRE(none_chosen.size() == 1);
    CHECK(none_chosen[0].code == "missing_choice");

    auto wrong_variant = check_selection(m, select({{"A", "ghost"}}));
    CHECK(!wrong_variant.empty());

    auto unknown_vp = check_selection(m, select({{"Z", "A1"}, {"A", "A1"}}));
    REQUIRE(!unknown_vp.empty());
    CHECK(unknown_vp[0].code == "unknown_vp");
}

TEST_CASE("excluded pairs cannot both be chosen") {
    Model m = load_fixture("substitute_vp_new_after.json"); // B1 excludes D2, RES alternative
    auto issues = check_selection(m, select({{"B", "B1"}, {"D", "D2"}, {"RES", "RV0"}}));
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == "vcc");
    CHECK(issues[0].ids == std::vector<std::string>{"B1", "D2"});

    CHECK(check_selection(m, select({{"B", "B1"}, {"D", "D1"}, {"RES", "RV0"}})).empty());
}

TEST_CASE("enumeration counts match the closed form") {
    Model m = cpmx::testing::tiny_vp_model();
    CHECK(enumerate_configurations(m).size() == 2);

    Model two = load_fixture("two_vp.json"); // alternative x2, optional 1 variant -> 2 * 2
    auto configs = enumerate_configurations(two);
    CHECK(configs.size() == 4);
    CHECK(configs.size() == cpmx::testing::closed_form_count(two));

    // deterministic order: sorted by variation point id, none before variants
    CHECK(configs[0].selection.at("B") == "B1");
    CHECK_FALSE(configs[0].selection.at("X").has_value());
    CHECK(configs[1].selection.at("B") == "B1");
    CHECK(configs[1].selection.at("X") == "X1");
}

TEST_CASE("constraints prune the enumeration") {
    Model m = load_fixture("substitute_vp_new_after.json");
    // raw space: B optional 1 variant (2) x D alternative 2 x RES alternative 2 = 8
    CHECK(configuration_space_size(m) == 8);
    auto configs = enumerate_configurations(m);
    CHECK(configs.size() == 6); // two of them pick both B1 and D2
    for (const Configuration& config : configs) {
        bool both = config.selection.at("B") == "B1" && config.selection.at("D") == "D2";
        CHECK_FALSE(both);
    }
    // and the independent oracle sees the same count
    CHECK(cpmx::testing::naive_enumerate(m).size() == 6);
}

TEST_CASE("the space bound is enforced") {
    Model m = cpmx::testing::tiny_vp_model();
    CHECK_THROWS_AS(enumerate_configurations(m, 1), Error);
}

TEST_CASE("deriving the spliced model keeps the chosen variant in the flow") {
    Model m = load_fixture("insert_vp_after.json");
    Configuration config = select({{"B", "B1"}, {"R1", "VR"}});
    Model derived = derive_variant(m, config);

    CHECK(derived.flows.count(FlowKey{"start", "A"}) == 1);
    CHECK(derived.flows.count(FlowKey{"A", "B1"}) == 1);
    CHECK(derived.flows.count(FlowKey{"B1", "D"}) == 1);
    CHECK(derived.flows.count(FlowKey{"D", "end"}) == 1);
    CHECK(derived.flows.size() == 4);
    CHECK(derived.flows.at(FlowKey{"A", "B1"}) == "cond1"); // inherited guard
    CHECK(derived.activities.at("B1").resource == "VR");
    CHECK(derived.activities.count("B") == 0);
    CHECK(derived.activities.count("B2") == 0);
    CHECK(variability_free(derived));
    CHECK(validate_model(derived).ok());
}

TEST_CASE("an unselected optional variation point is excised with bridging") {
    Model m = ModelBuilder()
                  .activity("A")
                  .activity("X", vp("optional"))
                  .activity("X1", variant("X"))
                  .activity("C")
                  .flow("start", "A")
                  .flow("A", "X", "go")
                  .flow("X", "C")
                  .flow("C", "end")
                  .build();
    Model derived = derive_variant(m, select({{"X", std::nullopt}}));
    CHECK(derived.activities.count("X") == 0);
    CHECK(derived.activities.count("X1") == 0);
    REQUIRE(derived.flows.count(FlowKey{"A", "C"}) == 1);
    CHECK(derived.flows.at(FlowKey{"A", "C"}) == "go");
    CHECK(validate_model(derived).ok());
}

TEST_CASE("a variant's selection condition becomes its incoming guard") {
    Model m = ModelBuilder()
                  .activity("X", vp("alternative"))
                  .activity("X1", variant("X", "when-ready"))
                  .flow("start", "X", "old-guard")
                  .flow("X", "end")
                  .build();
    Model derived = derive_variant(m, select({{"X", "X1"}}));
    CHECK(derived.flows.at(FlowKey{"start", "X1"}) == "when-ready");
}

TEST_CASE("invalid selections cannot derive") {
    Model m = cpmx::testing::tiny_vp_model();
    CHECK_THROWS_AS(derive_variant(m, select({{"A", std::nullopt}})), Error);
    try {
        derive_variant(m, select({}));
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_selection);
    }
}

TEST_CASE("every enumerated configuration of the scenario fixtures derives a sound plain model") {
    for (const char* name : {"insert_vp_after.json", "substitute_vp_new_after.json",
                             "substitute_vp_existing_after.json", "two_vp.json"}) {
        CAPTURE(name);
        Model m = load_fixture(name);
        for (const Configuration& config : enumerate_configurations(m)) {
            Model derived = derive_variant(m, config);
            CHECK(variability_free(derived));
            CHECK(validate_model(derived).ok());
        }
    }
}

TEST_CASE("derivation soundness holds across generated models") {
    cpmx::testing::Gen gen(7);
    cpmx::testing::GenOptions options;
    options.with_vccs = true;
    int derived_count = 0;
    for (int round = 0; round < 25; ++round) {
        Model m = gen.random_model(options);
        if (!validate_model(m).ok()) continue;
        for (const Configuration& config : enumerate_configurations(m)) {
            Model derived = derive_variant(m, config);
            CHECK(variability_free(derived));
            auto report = validate_model(derived);
            if (!report.ok()) {
                CAPTURE(save_model(m));
                CAPTURE(report.violations.front().message);
            }
            CHECK(report.ok());
            ++derived_count;
        }
    }
    CHECK(derived_count > 50);
}

TEST_CASE("variant insertion and deletion move the count monotonically") {
    cpmx::testing::Gen gen(15);
    cpmx::testing::GenOptions options; // constraint-free
    for (int round = 0; round < 20; ++round) {
        Model m = gen.random_model(options);
        if (!validate_model(m).ok()) continue;
        auto count = enumerate_configurations(m).size();
        CHECK(count == cpmx::testing::closed_form_count(m));

        std::vector<std::string> vps;
        for (const auto& [id, a] : m.activities)
            if (is_variation_point(a.role)) vps.push_back(id);
        if (vps.empty()) continue;
        const std::string& vp_id = vps.front();

        VaiParams grow{vp_id, std::nullopt,
                       VariantActivitySpec{gen.fresh("nv"), "nv", std::nullopt, {}, {}}};
        if (capacity_reached(m)) continue;
        Model grown = variant_activity_insert(m, grow).model;
        CHECK(enumerate_configurations(grown).size() >= count);
        CHECK(enumerate_configurations(grown).size() == cpmx::testing::closed_form_count(grown));

        // deleting it again restores the original count
        Model shrunk = variant_activity_delete(grown, grow.variant.id).model;
        CHECK(enumerate_configurations(shrunk).size() == count);
    }
}
