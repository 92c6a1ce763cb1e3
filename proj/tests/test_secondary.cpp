#include <doctest.h>

#include <functional>

#include "cpmx/errors.hpp"
#include "cpmx/io.hpp"
#include "cpmx/secondary.hpp"
#include "cpmx/validate.hpp"
#include "support/build.hpp"
#include "support/common.hpp"

using namespace cpmx;
using cpmx::testing::load_fixture;
using cpmx::testing::ModelBuilder;
using cpmx::testing::variant;
using cpmx::testing::vp;

namespace {

Errc code_of(const std::function<void()>& invoke) {
    try {
        invoke();
    } catch (const Error& e) {
        return e.code();
    }
    REQUIRE(false);
    return Errc::parse_error;
}

Model base_model() {
    return ModelBuilder()
        .activity("A", PlainRole{}, {"f1"}, "R", {"doc"})
        .resource("R", PlainRole{}, {"f1", "f2"})
        .data("doc")
        .flow("start", "A")
        .flow("A", "end")
        .build();
}

} // namespace

TEST_CASE("inserting a variation point resource with variants") {
    Model m = base_model();
    VpElementSpec spec{"RV", "RV", VpType::alternative, {}, "",
                       {VariantElementSpec{"RVa", "RVa", std::nullopt, {"f1"}, "", {}, {}},
                        VariantElementSpec{"RVb", "RVb", std::nullopt, {"f2"}, "", {}, {}}},
                       {}};
    ApplyResult result = vp_insert(m, ElementKind::resource, spec);
    CHECK(is_variation_point(result.model.resources.at("RV").role));
    CHECK(variant_ids_of(result.model, "RV") == std::vector<std::string>{"RVa", "RVb"});
    CHECK(validate_model(result.model).ok());

    SUBCASE("no variants, no insertion") {
        VpElementSpec empty{"RX", "RX", VpType::alternative, {}, "", {}, {}};
        CHECK(code_of([&] { vp_insert(m, ElementKind::resource, empty); }) ==
              Errc::empty_resulting_variant_set);
    }
    SUBCASE("assignment that would break coverage is rejected") {
        VpElementSpec uncovering{"RX", "RX", VpType::alternative, {}, "",
                                 {VariantElementSpec{"RXa", "RXa", std::nullopt, {"zz"}, "", {}, {}}},
                                 {"A"}}; // A needs f1
        CHECK(code_of([&] { vp_insert(m, ElementKind::resource, uncovering); }) ==
              Errc::coverage_violation);
    }
}

TEST_CASE("inserting a variation point data object and attaching it") {
    Model m = base_model();
    VpElementSpec spec{"DV", "DV", VpType::optional, {}, "document",
                       {VariantElementSpec{"DVa", "DVa", std::nullopt, {}, "document", {}, {}}},
                       {"A"}};
    ApplyResult result = vp_insert(m, ElementKind::data, spec);
    CHECK(result.model.activities.at("A").data_refs.count("DV") == 1);
    CHECK(validate_model(result.model).ok());
}

TEST_CASE("variant resource insertion assigns to the listed activities") {
    Model m = load_fixture("insert_vp_after.json");
    SecondaryVariantInsert params{"R1", std::nullopt,
                                  VariantElementSpec{"VR2", "VR2", std::nullopt,
                                                     {"RF1", "RF2", "RF3"}, "", {"B"}, {}}};
    ApplyResult result = variant_insert(m, ElementKind::resource, params);
    CHECK(result.model.activities.at("B").resource == "VR2");
    CHECK(validate_model(result.model).ok());

    SUBCASE("kind mismatch is a missing variation point") {
        SecondaryVariantInsert wrong{"dataobject1", std::nullopt,
                                     VariantElementSpec{"VRx", "VRx", std::nullopt, {}, "", {}, {}}};
        CHECK(code_of([&] { variant_insert(m, ElementKind::resource, wrong); }) ==
              Errc::no_variation_point);
    }
    SUBCASE("a plain resource transforms on request") {
        Model plain = base_model();
        SecondaryVariantInsert transform{"R", VpType::alternative,
                                         VariantElementSpec{"Rv", "Rv", std::nullopt,
                                                            {"f1", "f2"}, "", {}, {}}};
        ApplyResult transformed = variant_insert(plain, ElementKind::resource, transform);
        CHECK(is_variation_point(transformed.model.resources.at("R").role));
        CHECK(validate_model(transformed.model).ok());
    }
}

TEST_CASE("substituting a data variation point re-points references") {
    Model m = ModelBuilder()
                  .activity("A", PlainRole{}, {}, std::nullopt, {"DV"})
                  .data("DV", vp("alternative"))
                  .data("DVa", variant("DV"), "document")
                  .data("DVb", variant("DV"), "spreadsheet")
                  .flow("start", "A")
                  .flow("A", "end")
                  .build();
    SecondaryVpSubstitution params;
    params.old_id = "DV";
    params.replacement = VpElementSpec{"DW", "DW", VpType::alternative, {}, "document", {}, {}};
    ApplyResult result = vp_substitute(m, ElementKind::data, params);
    // compatible variant (matching data type) kept, the other one dropped
    CHECK(result.model.data_objects.count("DVa") == 1);
    CHECK(result.model.data_objects.count("DVb") == 0);
    CHECK(std::get<VariantRole>(result.model.data_objects.at("DVa").role).parent == "DW");
    CHECK(result.model.activities.at("A").data_refs.count("DW") == 1);
    CHECK(validate_model(result.model).ok());
}

TEST_CASE("identity substitution of a resource variation point changes nothing") {
    Model m = load_fixture("insert_vp_after.json");
    SecondaryVpSubstitution params;
    params.old_id = "R1";
    params.replacement = VpElementSpec{"R1", "R1", VpType::alternative, {}, "", {}, {}};
    params.dispositions["VR"] = SecondaryDisposition{DispositionAction::keep, std::nullopt};
    params.dispositions["VR0"] = SecondaryDisposition{DispositionAction::keep, std::nullopt};
    ApplyResult result = vp_substitute(m, ElementKind::resource, params);
    CHECK(canonical_hash(result.model) == canonical_hash(m));
}

TEST_CASE("substituting a resource variation point so coverage breaks is rejected") {
    Model m = load_fixture("insert_vp_after.json"); // B needs RF1..RF3 from R1
    SecondaryVpSubstitution params;
    params.old_id = "R1";
    params.replacement =
        VpElementSpec{"R5", "R5", VpType::alternative, {}, "",
                      {VariantElementSpec{"R5v", "R5v", std::nullopt, {"other"}, "", {}, {}}}, {}};
    params.dispositions["VR"] = SecondaryDisposition{DispositionAction::remove, std::nullopt};
    params.dispositions["VR0"] = SecondaryDisposition{DispositionAction::remove, std::nullopt};
    CHECK(code_of([&] { vp_substitute(m, ElementKind::resource, params); }) ==
          Errc::coverage_violation);
}

TEST_CASE("variant resource substitution keeps and breaks coverage as the payload dictates") {
    Model m = load_fixture("insert_vp_after.json"); // B1 needs RF1 from VR

    SUBCASE("a superset keeps every assignment") {
        VariantElementSpec bigger{"VRplus", "VRplus", std::nullopt,
                                  {"RF1", "RF2", "RF3", "RF4"}, "", {}, {}};
        ApplyResult result = variant_substitute(m, ElementKind::resource, "VR", bigger);
        CHECK(result.model.activities.at("B1").resource == "VRplus");
        CHECK(validate_model(result.model).ok());
    }
    SUBCASE("a smaller set breaks an assignment") {
        VariantElementSpec smaller{"VRminus", "VRminus", std::nullopt, {"RF3"}, "", {}, {}};
        CHECK(code_of([&] { variant_substitute(m, ElementKind::resource, "VR", smaller); }) ==
              Errc::coverage_violation);
    }
    SUBCASE("a data variant's type can change freely") {
        Model dm = ModelBuilder()
                       .activity("A", PlainRole{}, {}, std::nullopt, {"DVa"})
                       .data("DV", vp())
                       .data("DVa", variant("DV"), "document")
                       .data("DVb", variant("DV"), "document")
                       .flow("start", "A")
                       .flow("A", "end")
                       .build();
        VariantElementSpec retyped{"DVa", "DVa", std::nullopt, {}, "ledger", {}, {}};
        ApplyResult result = variant_substitute(dm, ElementKind::data, "DVa", retyped);
        CHECK(result.model.data_objects.at("DVa").data_type == "ledger");
        CHECK(result.model.activities.at("A").data_refs.count("DVa") == 1);
        CHECK(validate_model(result.model).ok());
    }
}

TEST_CASE("deleting variation point elements honors references and cascades") {
    Model m = load_fixture("insert_vp_after.json");

    SUBCASE("in-use deletion without cascade is refused") {
        CHECK(code_of([&] { vp_delete(m, ElementKind::resource, "R1", false); }) ==
              Errc::element_in_use);
    }
    SUBCASE("cascade clears assignments and references") {
        ApplyResult result = vp_delete(m, ElementKind::resource, "R1", true);
        CHECK(result.model.resources.empty());
        CHECK_FALSE(result.model.activities.at("B").resource.has_value());
        CHECK_FALSE(result.model.activities.at("B1").resource.has_value());
        CHECK(validate_model(result.model).ok());
    }
    SUBCASE("an unreferenced data variation point deletes cleanly") {
        Model dm = ModelBuilder()
                       .activity("A")
                       .data("DV", vp())
                       .data("DVa", variant("DV"))
                       .flow("start", "A")
                       .flow("A", "end")
                       .build();
        ApplyResult result = vp_delete(dm, ElementKind::data, "DV", false);
        CHECK(result.model.data_objects.empty());
        CHECK(validate_model(result.model).ok());
    }
}

TEST_CASE("deleting variant elements honors the guards") {
    Model m = load_fixture("insert_vp_after.json");

    SUBCASE("assigned variant needs the cascade") {
        CHECK(code_of([&] { variant_delete(m, ElementKind::resource, "VR", false); }) ==
              Errc::element_in_use);
        ApplyResult result = variant_delete(m, ElementKind::resource, "VR", true);
        CHECK(result.model.resources.count("VR") == 0);
        CHECK_FALSE(result.model.activities.at("B1").resource.has_value());
        CHECK(validate_model(result.model).ok());
    }
    SUBCASE("unassigned variant deletes without ceremony") {
        ApplyResult result = variant_delete(m, ElementKind::resource, "VR0", false);
        CHECK(result.model.resources.count("VR0") == 0);
        CHECK(validate_model(result.model).ok());
    }
    SUBCASE("the last data variant stays") {
        Model dm = ModelBuilder()
                       .activity("A")
                       .data("DV", vp())
                       .data("DVa", variant("DV"))
                       .flow("start", "A")
                       .flow("A", "end")
                       .build();
        CHECK(code_of([&] { variant_delete(dm, ElementKind::data, "DVa", false); }) ==
              Errc::last_variant);
    }
}

TEST_CASE("kind isolation: resource operations leave data and flows alone") {
    Model m = load_fixture("insert_vp_after.json");
    SecondaryVariantInsert params{"R1", std::nullopt,
                                  VariantElementSpec{"VR9", "VR9", std::nullopt, {"RF1"}, "", {}, {}}};
    ApplyResult result = variant_insert(m, ElementKind::resource, params);
    for (const Edit& edit : result.entry.edits) {
        CHECK(edit.kind != EditKind::add_flow);
        CHECK(edit.kind != EditKind::remove_flow);
        if (edit.kind == EditKind::add_node || edit.kind == EditKind::remove_node)
            CHECK(edit.data.at("kind") == "resource");
        if (edit.kind == EditKind::set_attribute)
            CHECK(edit.data.at("kind") != "data");
    }

    // and the other way around
    Model dm = base_model();
    VpElementSpec data_spec{"DV", "DV", VpType::optional, {}, "document",
                            {VariantElementSpec{"DVa", "DVa", std::nullopt, {}, "document", {}, {}}},
                            {}};
    ApplyResult data_result = vp_insert(dm, ElementKind::data, data_spec);
    for (const Edit& edit : data_result.entry.edits) {
        CHECK(edit.kind != EditKind::add_flow);
        CHECK(edit.kind != EditKind::remove_flow);
        if (edit.kind == EditKind::add_node || edit.kind == EditKind::remove_node)
            CHECK(edit.data.at("kind") == "data");
        if (edit.kind == EditKind::set_attribute)
            CHECK(edit.data.at("kind") != "resource");
    }
}

TEST_CASE("deletion guards see constraints across element kinds") {
    // an activity variant requiring a resource variant pins it in place
    Model m = ModelBuilder()
                  .activity("A", vp())
                  .activity("A1", variant("A"))
                  .activity("A2", variant("A"))
                  .resource("R", vp())
                  .resource("RVa", variant("R"), {"f"})
                  .resource("RVb", variant("R"), {"f"})
                  .flow("start", "A")
                  .flow("A", "end")
                  .vcc("A1", VccRelation::requires_presence, "RVa")
                  .build();
    CHECK(code_of([&] { variant_delete(m, ElementKind::resource, "RVa", true); }) ==
          Errc::dependent_variant);
    CHECK(code_of([&] { vp_delete(m, ElementKind::resource, "R", true); }) ==
          Errc::dependent_variant);

    // the unconstrained sibling goes quietly
    ApplyResult result = variant_delete(m, ElementKind::resource, "RVb", true);
    CHECK(validate_model(result.model).ok());
}
