#include <doctest.h>

#include "cpmx/constraints.hpp"
#include "cpmx/errors.hpp"
#include "cpmx/evolution.hpp"
#include "cpmx/validate.hpp"
#include "support/build.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace cpmx;
using nlohmann::json;
using cpmx::testing::load_fixture_json;
using cpmx::testing::ModelBuilder;
using cpmx::testing::variant;
using cpmx::testing::vp;

TEST_CASE("EC1: inserting a variation point needs a variant") {
    Model m = cpmx::testing::load_fixture("insert_vp_before.json");
    json params = load_fixture_json("insert_vp_params.json");

    auto satisfied = check_evolution_constraints(m, "vpai", params);
    CHECK(satisfied[0].status == EcStatus::satisfied);
    CHECK(satisfied[1].status == EcStatus::not_applicable);

    params["variants"] = json::array();
    auto violated = check_evolution_constraints(m, "vpai", params);
    CHECK(violated[0].status == EcStatus::violated);
    CHECK(violated[0].offenders == std::vector<std::string>{"B"});
}

TEST_CASE("EC2: inserting a variant needs a variation point or a transformation") {
    Model m = ModelBuilder()
                  .activity("P")
                  .activity("V", vp())
                  .activity("V1", variant("V"))
                  .flow("start", "P")
                  .flow("P", "V")
                  .flow("V", "end")
                  .build();
    json on_vp{{"vp_id", "V"}, {"variant", json{{"id", "V2"}}}};
    CHECK(check_evolution_constraints(m, "vai", on_vp)[1].status == EcStatus::satisfied);

    json on_plain{{"vp_id", "P"}, {"variant", json{{"id", "P1"}}}};
    auto violated = check_evolution_constraints(m, "vai", on_plain);
    CHECK(violated[1].status == EcStatus::violated);
    CHECK(violated[1].offenders == std::vector<std::string>{"P"});

    json with_transform = on_plain;
    with_transform["transform"] = "optional";
    CHECK(check_evolution_constraints(m, "vai", with_transform)[1].status == EcStatus::satisfied);
}

TEST_CASE("EC3: substitution must handle every variant") {
    Model m = cpmx::testing::tiny_vp_model();
    json keeping{{"old_vp", "A"},
                 {"substitute", json{{"new", json{{"id", "B"}}}}},
                 {"vp_type", "alternative"},
                 {"dispositions", json{{"A1", json{{"action", "keep"}}},
                                       {"A2", json{{"action", "keep"}}}}}};
    CHECK(check_evolution_constraints(m, "vpas", keeping)[2].status == EcStatus::satisfied);

    json dropping_all{{"old_vp", "A"},
                      {"substitute", json{{"new", json{{"id", "B"}}}}},
                      {"vp_type", "alternative"},
                      {"dispositions", json{{"A1", json{{"action", "delete"}}},
                                            {"A2", json{{"action", "delete"}}}}}};
    auto violated = check_evolution_constraints(m, "vpas", dropping_all);
    CHECK(violated[2].status == EcStatus::violated);
    CHECK(violated[2].offenders == std::vector<std::string>{"A1", "A2"});

    json stray{{"old_vp", "A"},
               {"substitute", json{{"new", json{{"id", "B"}}}}},
               {"vp_type", "alternative"},
               {"dispositions", json{{"Zed", json{{"action", "delete"}}}}}};
    auto orphaned = check_evolution_constraints(m, "vpas", stray);
    CHECK(orphaned[2].status == EcStatus::violated);
    CHECK(orphaned[2].offenders == std::vector<std::string>{"Zed"});
}

TEST_CASE("EC4: variation point deletion must cascade cleanly") {
    Model free_standing = cpmx::testing::tiny_vp_model();
    CHECK(check_evolution_constraints(free_standing, "vpad", json{{"vp_id", "A"}})[3].status ==
          EcStatus::satisfied);

    Model entangled = ModelBuilder()
                          .activity("A", vp())
                          .activity("A1", variant("A"))
                          .activity("B", vp())
                          .activity("B1", variant("B"))
                          .flow("start", "A")
                          .flow("A", "B")
                          .flow("B", "end")
                          .vcc("B1", VccRelation::requires_presence, "A1")
                          .build();
    auto violated = check_evolution_constraints(entangled, "vpad", json{{"vp_id", "A"}});
    CHECK(violated[3].status == EcStatus::violated);
    CHECK(violated[3].offenders == std::vector<std::string>{"B1"});
}

TEST_CASE("EC5: variant deletion checks the other variants' constraints") {
    Model m = cpmx::testing::tiny_vp_model();
    CHECK(check_evolution_constraints(m, "vad", json{{"variant_id", "A2"}})[4].status ==
          EcStatus::satisfied);

    m.vccs.insert(Vcc{"A1", VccRelation::requires_presence, "A2"});
    auto violated = check_evolution_constraints(m, "vad", json{{"variant_id", "A2"}});
    CHECK(violated[4].status == EcStatus::violated);
    CHECK(violated[4].offenders == std::vector<std::string>{"A1"});
}

TEST_CASE("unknown pattern ids are rejected") {
    Model m = cpmx::testing::tiny_vp_model();
    CHECK_THROWS_AS(check_evolution_constraints(m, "xyz", json::object()), Error);
}

TEST_CASE("contradictory constraint pairs are reported") {
    Model m = cpmx::testing::tiny_vp_model();
    m.vccs.insert(Vcc{"A1", VccRelation::requires_presence, "A2"});
    m.vccs.insert(Vcc{"A1", VccRelation::excludes_presence, "A2"});
    auto conflicts = check_vcc_consistency(m);
    REQUIRE(!conflicts.empty());
    bool found = false;
    for (const auto& conflict : conflicts)
        if (conflict.kind == "contradiction") found = true;
    CHECK(found);
}

TEST_CASE("a requirement loop through an exclusion makes the variant unselectable") {
    // two variation points so the requirement crosses them
    Model m = ModelBuilder()
                  .activity("A", vp("optional"))
                  .activity("A1", variant("A"))
                  .activity("B", vp("optional"))
                  .activity("B1", variant("B"))
                  .flow("start", "A")
                  .flow("A", "B")
                  .flow("B", "end")
                  .vcc("A1", VccRelation::requires_presence, "B1")
                  .vcc("B1", VccRelation::excludes_presence, "A1")
                  .build();
    auto conflicts = check_vcc_consistency(m);
    bool unselectable_a1 = false;
    for (const auto& conflict : conflicts)
        if (conflict.kind == "unselectable" && conflict.ids == std::vector<std::string>{"A1"})
            unselectable_a1 = true;
    CHECK(unselectable_a1);

    // the oracle agrees: no valid configuration contains A1
    for (const auto& selection : cpmx::testing::naive_enumerate(m))
        for (const auto& [vp_id, choice] : selection) CHECK(choice != "A1");
}

TEST_CASE("requires between siblings of one variation point is self-competition") {
    Model m = cpmx::testing::tiny_vp_model();
    m.vccs.insert(Vcc{"A1", VccRelation::requires_presence, "A2"});
    auto conflicts = check_vcc_consistency(m);
    bool self_competition = false;
    for (const auto& conflict : conflicts)
        if (conflict.kind == "self_competition") self_competition = true;
    CHECK(self_competition);
}

TEST_CASE("no constraints, no conflicts") {
    CHECK(check_vcc_consistency(cpmx::testing::tiny_vp_model()).empty());
}

TEST_CASE("unselectability agrees with the brute-force oracle on small models") {
    cpmx::testing::Gen gen(99);
    cpmx::testing::GenOptions options;
    options.max_chain = 4;
    options.max_vps = 3;
    options.max_variants = 3;
    options.with_vccs = true;
    int checked = 0;
    for (int round = 0; round < 40; ++round) {
        Model m = gen.random_model(options);
        if (!validate_model(m).ok()) continue;
        ++checked;

        std::set<std::string> oracle_selectable;
        for (const auto& selection : cpmx::testing::naive_enumerate(m))
            for (const auto& [vp_id, choice] : selection)
                if (choice) oracle_selectable.insert(*choice);

        std::set<std::string> reported_unselectable;
        for (const auto& conflict : check_vcc_consistency(m))
            if (conflict.kind == "unselectable") reported_unselectable.insert(conflict.ids.front());

        for (const std::string& variant_id : variant_ids(m)) {
            CAPTURE(variant_id);
            CHECK(reported_unselectable.count(variant_id) ==
                  (oracle_selectable.count(variant_id) ? 0u : 1u));
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("direct and transitive dependents") {
    Model m = ModelBuilder()
                  .activity("A", vp("optional"))
                  .activity("v1", variant("A"))
                  .activity("B", vp("optional"))
                  .activity("v2", variant("B"))
                  .activity("C", vp("optional"))
                  .activity("v3", variant("C"))
                  .flow("start", "A")
                  .flow("A", "B")
                  .flow("B", "C")
                  .flow("C", "end")
                  .vcc("v1", VccRelation::requires_presence, "v2")
                  .vcc("v2", VccRelation::requires_presence, "v3")
                  .build();
    CHECK(variant_dependents(m, "v3") == std::set<std::string>{"v2"});
    CHECK(variant_dependents(m, "v3", true) == std::set<std::string>{"v1", "v2"});
    CHECK(variant_dependents(m, "v2") == std::set<std::string>{"v1"});
    CHECK_THROWS_AS(variant_dependents(m, "A"), Error);
}

TEST_CASE("excludes is not a dependency") {
    Model m = cpmx::testing::load_fixture("substitute_vp_new_after.json"); // B1 excludes D2
    CHECK(variant_dependents(m, "D2").empty());
}

TEST_CASE("an all-incompatible derived plan without replacements violates EC3") {
    Model m = cpmx::testing::tiny_vp_model();
    m.activities.at("A1").req_f = {"old1"};
    m.activities.at("A2").req_f = {"old2"};
    // the substitute covers neither variant, and the plan adds nothing new
    nlohmann::json params{{"old_vp", "A"},
                          {"substitute", nlohmann::json{{"new", nlohmann::json{{"id", "S"}}}}},
                          {"vp_type", "alternative"},
                          {"req_f", nlohmann::json::array({"fresh"})}};
    auto report = check_evolution_constraints(m, "vpas", params);
    CHECK(report[2].status == EcStatus::violated);

    // with one new variant the plan is sound again
    params["new_variants"] = nlohmann::json::array({nlohmann::json{{"id", "S1"}}});
    CHECK(check_evolution_constraints(m, "vpas", params)[2].status == EcStatus::satisfied);
}

TEST_CASE("dependent-variant failures always correspond to reported dependents") {
    Model m = cpmx::testing::tiny_vp_model();
    m.vccs.insert(Vcc{"A1", VccRelation::requires_presence, "A2"});
    bool threw = false;
    try {
        variant_activity_delete(m, "A2");
    } catch (const Error& e) {
        threw = true;
        CHECK(e.code() == Errc::dependent_variant);
        for (const std::string& id : e.ids()) CHECK(variant_dependents(m, "A2").count(id) == 1);
    }
    CHECK(threw);
}
