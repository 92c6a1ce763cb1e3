#include <doctest.h>

#include <map>
#include <set>

#include "cpmx/catalog.hpp"
#include "support/common.hpp"

using namespace cpmx;

TEST_CASE("the catalog holds 18 concrete patterns in three sub-systems") {
    int concrete = 0, abstract_count = 0;
    std::map<ElementKind, int> per_kind;
    for (const PatternDescriptor& d : list_patterns()) {
        if (d.is_abstract) ++abstract_count;
        else {
            ++concrete;
            ++per_kind[d.kind];
        }
    }
    CHECK(concrete == 18);
    CHECK(abstract_count == 9);
    CHECK(per_kind[ElementKind::activity] == 6);
    CHECK(per_kind[ElementKind::resource] == 6);
    CHECK(per_kind[ElementKind::data] == 6);
}

TEST_CASE("catalog order is stable") {
    auto first = list_patterns();
    auto second = list_patterns();
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].id == second[i].id);
}

TEST_CASE("catalog closure: every referenced id resolves") {
    for (const PatternDescriptor& d : list_patterns()) {
        for (const std::string& id : d.context) CHECK(find_pattern(id) != nullptr);
        for (const std::string& id : d.uses) CHECK(find_pattern(id) != nullptr);
        if (d.refines) CHECK(find_pattern(*d.refines) != nullptr);
    }
}

TEST_CASE("the insertion pattern's interface matches its documented relations") {
    const PatternDescriptor* vpai = find_pattern("VPAI");
    REQUIRE(vpai);
    CHECK(vpai->refines == "AI");
    CHECK(std::set<std::string>(vpai->uses.begin(), vpai->uses.end()) ==
          std::set<std::string>{"VAI", "DI", "RI"});
    CHECK(std::set<std::string>(vpai->context.begin(), vpai->context.end()) ==
          std::set<std::string>{"VAI", "DI", "RI"});
}

TEST_CASE("the substitution pattern's interface matches its documented relations") {
    const PatternDescriptor* vpas = find_pattern("VPAS");
    REQUIRE(vpas);
    CHECK(vpas->refines == "AS");
    CHECK(std::set<std::string>(vpas->uses.begin(), vpas->uses.end()) ==
          std::set<std::string>{"DS", "RS", "VAS", "VAI", "VAD"});
}

TEST_CASE("refines edges form a forest rooted at the abstract patterns") {
    RelationGraph graph = pattern_relations();
    CHECK(graph.refines_edges.size() == 18); // every concrete pattern refines one parent
    std::set<std::string> roots;
    for (const PatternDescriptor& d : list_patterns()) {
        if (d.is_abstract) {
            CHECK_FALSE(d.refines.has_value());
            roots.insert(d.id);
        }
    }
    for (const auto& [child, parent] : graph.refines_edges) {
        CHECK(roots.count(parent) == 1);   // parents are abstract
        CHECK(roots.count(child) == 0);    // children are concrete
    }
    // two levels and no concrete-to-concrete edges: trivially acyclic
}

TEST_CASE("the relation graph renders as structurally sound DOT") {
    std::string dot = relations_dot();
    CHECK(cpmx::testing::looks_like_dot(dot));
    CHECK(dot.find("\"VPAI\" -> \"AI\" [label=\"refines\"];") != std::string::npos);
    CHECK(dot.find("style=dashed, label=\"uses\"") != std::string::npos);
}
