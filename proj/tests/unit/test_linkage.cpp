#include <gtest/gtest.h>

#include "bizmeta/demo_fixture.hpp"
#include "bizmeta/error.hpp"
#include "bizmeta/linkage.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bizmeta;
using namespace bizmeta::testing;

namespace {

Date d(const char* s) { return Date::parse(s); }

using Ids = std::set<std::string>;

}  // namespace

TEST(Links, KindAndTargetChecks) {
    Repository repo = demo_repository();
    EXPECT_NO_THROW(repo.link(LinkKind::ConceptDimension, "bank_type", LinkTarget::dimension_of("Bank"), d("2001-01-01")));
    EXPECT_NO_THROW(repo.link(LinkKind::ConceptDimRow, "bank_nationalized", LinkTarget::row("Bank", "FBK"), d("2001-01-01")));
    EXPECT_THROW(repo.link(LinkKind::MeasureFact, "proc_onsite", LinkTarget::fact_column("NPAQuarterly", "npa_ratio"),
                           d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::MeasureFact, "goal_npa", LinkTarget::fact_column("NPAQuarterly", "npa_ratio"),
                           d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::MeasureFact, "meas_npa", LinkTarget::fact_column("NPAQuarterly", "nope"),
                           d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::ConceptDimRow, "bank", LinkTarget::row("Bank", "NOPE"), d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::ConceptDimension, "bank", LinkTarget::dimension_of("Branch"), d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::ActionDimRow, "bank", LinkTarget::row("Bank", "XYZ"), d("2001-01-01")),
                 ValidationError);
    EXPECT_THROW(repo.link(LinkKind::ConceptDimension, "ghost", LinkTarget::dimension_of("Bank"), d("2001-01-01")),
                 NotFound);
}

TEST(Links, EndLinkRules) {
    Repository repo = demo_repository();
    const auto id = repo.link(LinkKind::ConceptDimension, "bank_type", LinkTarget::dimension_of("Bank"), d("2001-01-01"));
    EXPECT_THROW(repo.end_link(id, d("2001-01-01")), Conflict);
    repo.end_link(id, d("2001-02-01"));
    EXPECT_THROW(repo.end_link(id, d("2001-03-01")), Conflict);
    EXPECT_THROW(repo.end_link("l999", d("2001-03-01")), NotFound);
    EXPECT_EQ(repo.link_history(id).back().interval, ValidInterval::between(d("2001-01-01"), d("2001-02-01")));
}

TEST(Navigate, DepartmentGoals) {
    const Repository repo = demo_repository();
    EXPECT_EQ(repo.navigate("dept_bsd", "getGoals", d("2001-03-31")), (Ids{"goal_finsup", "goal_fraud"}));
    std::set<std::string> names;
    for (const auto& id : repo.navigate("dept_bsd", "getGoals", d("2001-03-31"))) {
        names.insert(repo.store().get_as_of(id, d("2001-03-31"))->name);
    }
    EXPECT_EQ(names, (Ids{"fraud detection", "financial supervision"}));
}

TEST(Navigate, PolymorphicGetGoals) {
    const Repository repo = demo_repository();
    EXPECT_EQ(repo.navigate("proc_supervision", "getGoals", d("2001-03-31")), Ids{"goal_finsup"});
    EXPECT_EQ(repo.navigate("meas_npa", "getGoals", d("2001-03-31")), (Ids{"goal_finsup", "goal_npa"}));
    EXPECT_EQ(repo.navigate("bank", "getGoals", d("2001-03-31")), Ids{"goal_npa"});
}

TEST(Navigate, LeafEntityHasNoSubEntities) {
    const Repository repo = demo_repository();
    EXPECT_TRUE(repo.navigate("bank_fbk", "getSubEntity", d("2001-03-31")).empty());
}

TEST(Navigate, SubEntityFollowsRetype) {
    const Repository repo = demo_repository();
    EXPECT_EQ(repo.navigate("bank_rural", "getSubEntity", d("2000-06-30")), (Ids{"bank_pqr", "bank_xyz"}));
    EXPECT_TRUE(repo.navigate("bank_rural", "getSubEntity", d("2000-12-31")).empty());
    EXPECT_EQ(repo.navigate("bank_nationalized", "getSubEntity", d("2000-12-31")), (Ids{"bank_sbx", "bank_xyz"}));
}

TEST(Navigate, InapplicableMethodListsValidOnes) {
    const Repository repo = demo_repository();
    try {
        repo.navigate("meas_npa", "getSubEntity", d("2001-03-31"));
        FAIL();
    } catch (const BadRequest& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("getGoals"), std::string::npos) << msg;
        EXPECT_NE(msg.find("getEvaluation"), std::string::npos) << msg;
    }
    EXPECT_THROW(repo.navigate("meas_npa", "noSuchMethod", d("2001-03-31")), BadRequest);
    EXPECT_THROW(repo.navigate("ghost", "getGoals", d("2001-03-31")), NotFound);
}

TEST(Navigate, DispatchMatchesIndependentTable) {
    for (ConceptKind k : kAllConceptKinds) {
        for (const auto& m : traversal_method_names()) {
            const auto mine = dispatch(m, k);
            const auto theirs = rule_for(m, k);
            ASSERT_EQ(mine.has_value(), theirs.has_value()) << m << " on " << to_string(k);
            if (mine) {
                EXPECT_EQ(mine->association, theirs->association);
                EXPECT_EQ(mine->direction, theirs->direction);
            }
        }
    }
}

TEST(Navigate, MenusPerKind) {
    EXPECT_EQ(menu_for(ConceptKind::InternalEntity),
              (std::vector<std::string>{"getSubEntity", "getProcesses", "getGoals", "getAffectingEvents",
                                        "getActionsTaken", "getDimension", "history"}));
    EXPECT_EQ(menu_for(ConceptKind::Measure),
              (std::vector<std::string>{"getGoals", "getEvaluation", "getFacts", "history"}));
    for (ConceptKind k : kAllConceptKinds) {
        const auto menu = menu_for(k);
        EXPECT_EQ(menu.back(), "history");
        for (const auto& m : traversal_methods_for(k)) {
            EXPECT_NE(std::find(menu.begin(), menu.end(), m), menu.end());
        }
    }
}

TEST(Navigate, EqualsTraverseOnRandomStores) {
    Rng rng(77);
    for (int s = 0; s < 4; ++s) {
        Repository repo = random_repository(rng, {120, 800, 1.0, 0.2, 0.3}, {6, 10, 50}, 40);
        std::vector<std::string> ids;
        for (const auto& [id, chain] : repo.store().concepts()) ids.push_back(id);
        for (int probe = 0; probe < 400; ++probe) {
            const auto& id = ids[probe % ids.size()];
            const ConceptKind kind = repo.store().kind_of(id);
            const Date t = random_date(rng);
            const Date to = t + 200;
            for (const auto& m : traversal_method_names()) {
                const auto rule = rule_for(m, kind);
                if (!rule) {
                    EXPECT_THROW(repo.navigate(id, m, t), BadRequest);
                    continue;
                }
                ASSERT_EQ(repo.navigate(id, m, t), traverse_scan(repo.store(), id, rule->association, rule->direction, t));
                ASSERT_EQ(repo.navigate_during(id, m, ValidInterval::between(t, to)),
                          traverse_during_scan(repo.store(), id, rule->association, rule->direction, t, to));
            }
        }
    }
}

TEST(GetDimension, BankEntity) {
    const Repository repo = demo_repository();
    const auto view = repo.get_dimension("bank", d("2000-12-31"));
    EXPECT_EQ(view.dimension, "Bank");
    ASSERT_EQ(view.rows.size(), 4u);
    for (const auto& r : view.rows) {
        EXPECT_TRUE(r.interval.covers(d("2000-12-31")));
        if (r.key == "XYZ") EXPECT_EQ(std::get<std::string>(r.attrs.at("bank_type")), "Nationalized");
    }
    EXPECT_EQ(repo.get_dimension("bank", d("1994-01-01")).rows.size(), 2u);
}

TEST(GetDimension, UnmappedAndEndedLinks) {
    Repository repo = demo_repository();
    try {
        repo.get_dimension("dept_bsd", d("2000-12-31"));
        FAIL();
    } catch (const NotFound& e) {
        EXPECT_NE(std::string(e.what()).find("not dimension-mapped"), std::string::npos);
    }
    const auto id = repo.link(LinkKind::ConceptDimension, "bank_type", LinkTarget::dimension_of("Bank"), d("2000-01-01"));
    repo.end_link(id, d("2000-06-01"));
    EXPECT_NO_THROW(repo.get_dimension("bank_type", d("2000-03-01")));
    EXPECT_THROW(repo.get_dimension("bank_type", d("2000-06-01")), NotFound);
}

TEST(GetFacts, LinkedAndUnlinked) {
    Repository repo = demo_repository();
    EXPECT_EQ(repo.get_facts("meas_income", d("2001-01-01")), (FactRef{"IncomeFact", "interest_income"}));
    const auto m = repo.store().create_concept(ConceptKind::Measure, "unlinked", "", {}, d("2000-01-01"));
    EXPECT_THROW(repo.get_facts(m, d("2001-01-01")), NotFound);
    EXPECT_THROW(repo.get_facts("goal_npa", d("2001-01-01")), BadRequest);
}

TEST(GetFacts, EraAppropriateLink) {
    Repository repo = demo_repository();
    const auto m = repo.store().create_concept(ConceptKind::Measure, "credit", "", {}, d("1999-01-01"));
    const auto first = repo.link(LinkKind::MeasureFact, m, LinkTarget::fact_column("AgriCredit", "agri_credit"),
                                 d("1999-01-01"));
    repo.end_link(first, d("2000-01-01"));
    repo.link(LinkKind::MeasureFact, m, LinkTarget::fact_column("IncomeFact", "interest_income"), d("2000-01-01"));
    EXPECT_EQ(repo.get_facts(m, d("1999-12-31")).fact, "AgriCredit");
    EXPECT_EQ(repo.get_facts(m, d("2000-01-01")).fact, "IncomeFact");
    EXPECT_THROW(repo.get_facts(m, d("1998-12-31")), NotFound);
}

TEST(RowToConcepts, DemoRows) {
    const Repository repo = demo_repository();
    EXPECT_EQ(repo.row_to_concepts("Bank", "XYZ", d("2000-12-31")), (Ids{"bank", "bank_nationalized", "bank_xyz"}));
    EXPECT_EQ(repo.row_to_concepts("Bank", "XYZ", d("2000-06-30")), (Ids{"bank", "bank_rural", "bank_xyz"}));
    EXPECT_EQ(repo.row_to_concepts("Bank", "SBX", d("2000-12-31")), (Ids{"bank", "bank_nationalized", "bank_sbx"}));
    EXPECT_TRUE(repo.row_to_concepts("Bank", "NOPE", d("2000-12-31")).empty());
    EXPECT_TRUE(repo.row_to_concepts("Bank", "XYZ", d("1980-01-01")).empty());
    EXPECT_TRUE(repo.row_to_concepts("Nope", "XYZ", d("2000-12-31")).empty());
}

TEST(RowToConcepts, MatchesLinkScan) {
    Rng rng(31);
    for (int s = 0; s < 4; ++s) {
        const Repository repo = random_repository(rng, {100, 100, 0.5, 0.2, 0.3}, {12, 20, 10}, 150);
        for (int probe = 0; probe < 300; ++probe) {
            const std::string key = "R" + std::to_string(probe % 13);
            const Date t = random_date(rng);
            ASSERT_EQ(repo.row_to_concepts("Region", key, t), row_to_concepts_scan(repo, "Region", key, t));
        }
    }
}

TEST(RowToConcepts, DimensionRoundTrip) {
    const Repository repo = demo_repository();
    for (const char* t : {"1996-01-01", "2000-06-30", "2001-06-30"}) {
        for (const auto& row : repo.get_dimension("bank", d(t)).rows) {
            EXPECT_TRUE(repo.row_to_concepts("Bank", row.key, d(t)).count("bank")) << row.key << " " << t;
        }
    }
}

TEST(FactToMeasures, Demo) {
    const Repository repo = demo_repository();
    EXPECT_EQ(repo.fact_to_measures("NPAQuarterly", d("2001-06-30")), Ids{"meas_npa"});
    EXPECT_TRUE(repo.fact_to_measures("NPAQuarterly", d("1996-01-01")).empty());
    EXPECT_THROW(repo.fact_to_measures("Nope", d("2001-06-30")), NotFound);
}

TEST(RecordEvaluation, CreatesConceptAndAssociations) {
    Repository repo = demo_repository();
    EvaluationInput in{"goal_agri", "meas_npa",
                       "credit to agriculture sector in northern states is not growing at expected rate",
                       d("2001-06-30"), "query text"};
    const auto rec = repo.record_evaluation(in);
    EXPECT_EQ(rec.association_ids.size(), 2u);
    const auto v = repo.store().get_as_of(rec.evaluation_id, d("2001-06-30"));
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->kind, ConceptKind::Evaluation);
    EXPECT_EQ(v->name, in.text);
    EXPECT_EQ(v->description, "query text");
    EXPECT_TRUE(v->interval.is_open());
    EXPECT_TRUE(repo.navigate("goal_agri", "getEvaluation", d("2001-06-30")).count(rec.evaluation_id));
    EXPECT_TRUE(repo.navigate("meas_npa", "getEvaluation", d("2001-07-30")).count(rec.evaluation_id));
    EXPECT_FALSE(repo.navigate("goal_agri", "getEvaluation", d("2001-06-29")).count(rec.evaluation_id));
    for (const auto& a : rec.association_ids) {
        const auto& av = repo.store().association_history(a).back();
        EXPECT_TRUE(validate_association(av, repo.store().kind_of(av.src), repo.store().kind_of(av.dst)).empty());
    }
    EXPECT_TRUE(validate_concept(*v).empty());
}

TEST(RecordEvaluation, RequiresGoalAndIsAtomic) {
    Repository repo = demo_repository();
    const Repository before = repo;
    EXPECT_THROW(repo.record_evaluation({std::nullopt, "meas_npa", "x", d("2001-06-30"), std::nullopt}), BadRequest);
    EXPECT_THROW(repo.record_evaluation({"goal_agri", "goal_npa", "x", d("2001-06-30"), std::nullopt}), ValidationError);
    EXPECT_THROW(repo.record_evaluation({"goal_agri", "ghost", "x", d("2001-06-30"), std::nullopt}), NotFound);
    EXPECT_TRUE(repo == before);
}

TEST(RecordAction, TargetsTwoRows) {
    Repository repo = demo_repository();
    const auto ev = repo.record_evaluation({"goal_finsup", std::nullopt, "equity exposure too high", d("2001-06-30"), {}});
    const auto rec = repo.record_action(
        {{ev.evaluation_id}, "reduce assets in equities", {{"Bank", "XYZ"}, {"Bank", "SBX"}}, d("2001-07-01")});
    EXPECT_EQ(rec.association_ids.size(), 1u);
    EXPECT_EQ(rec.link_ids.size(), 2u);
    EXPECT_FALSE(rec.free_standing);
    EXPECT_EQ(repo.store().kind_of(rec.action_id), ConceptKind::Action);
    // Data -> metadata: every concept mapped to a targeted row sees the action.
    for (const auto& c : repo.row_to_concepts("Bank", "XYZ", d("2001-07-01"))) {
        EXPECT_TRUE(repo.actions_targeting(c, d("2001-07-01")).count(rec.action_id)) << c;
    }
    EXPECT_FALSE(repo.actions_targeting("bank_fbk", d("2001-07-01")).count(rec.action_id));
    EXPECT_FALSE(repo.actions_targeting("bank_xyz", d("2001-06-30")).count(rec.action_id));
}

TEST(RecordAction, FreeStandingAndActionConcept) {
    Repository repo = demo_repository();
    const auto rec = repo.record_action({{}, "monitor", {}, d("2001-07-01")});
    EXPECT_TRUE(rec.free_standing);
    repo.store().create_association(AssociationKind::ActionConcept, rec.action_id, "goal_npa", d("2001-07-01"));
    EXPECT_EQ(repo.navigate("goal_npa", "getActionsTaken", d("2001-07-02")), Ids{rec.action_id});
    EXPECT_TRUE(repo.actions_targeting("goal_npa", d("2001-07-02")).count(rec.action_id));
    const Repository before = repo;
    EXPECT_THROW(repo.record_action({{"goal_npa"}, "bad", {}, d("2001-07-01")}), ValidationError);
    EXPECT_THROW(repo.record_action({{}, "bad", {{"Bank", "NOPE"}}, d("2001-07-01")}), ValidationError);
    EXPECT_TRUE(repo == before);
}

TEST(RepositoryValue, CopiesAreIndependentSnapshots) {
    Repository repo = demo_repository();
    const Repository snapshot = repo;
    repo.store().update_concept("goal_npa", ConceptChanges{std::string("renamed"), {}, {}}, d("2002-01-01"));
    EXPECT_EQ(snapshot.store().get_history("goal_npa").size(), 1u);
    EXPECT_FALSE(snapshot == repo);
    EXPECT_EQ(repo.max_known_date(), d("2002-01-01"));
    EXPECT_EQ(snapshot.max_known_date(), d("2001-06-30"));
}
