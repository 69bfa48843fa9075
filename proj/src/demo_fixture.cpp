#include "bizmeta/demo_fixture.hpp"

#include <array>

namespace bizmeta {

namespace {

Date d(const char* text) { return Date::parse(text); }

constexpr std::array<const char*, 10> kQuarterEnds = {
    "1999-03-31", "1999-06-30", "1999-09-30", "1999-12-31", "2000-03-31",
    "2000-06-30", "2000-09-30", "2000-12-31", "2001-03-31", "2001-06-30",
};

struct BankSeries {
    const char* code;
    std::vector<double> npa_ratio;
    std::vector<double> gross_assets;
    std::vector<double> interest_income;
    std::vector<double> fraud_cases;
    std::vector<double> agri_credit;
};

// PQR Bank reports until it is absorbed by XYZ Bank in 2000-Q3.
const std::vector<BankSeries>& bank_series() {
    static const std::vector<BankSeries> series = {
        {"XYZ",
         {8.0, 8.2, 8.1, 8.4, 8.6, 8.5, 10.9, 11.2, 10.8, 10.5},
         {1200, 1215, 1230, 1250, 1262, 1280, 1890, 1905, 1920, 1940},
         {31.5, 32.0, 32.8, 33.1, 33.9, 34.2, 49.8, 50.5, 51.0, 51.7},
         {2, 1, 3, 2, 4, 2, 5, 3, 2, 1},
         {9.0, 8.7, 8.1, 7.5, 7.2, 6.8, 6.1, 5.9, 5.2, 4.8}},
        {"PQR",
         {12.0, 12.4, 12.9, 13.1, 13.6, 13.8},
         {450, 452, 455, 457, 460, 461},
         {11.2, 11.0, 10.9, 10.7, 10.4, 10.1},
         {1, 2, 1, 3, 2, 4},
         {11.0, 10.2, 9.8, 9.1, 8.8, 8.0}},
        {"SBX",
         {6.0, 6.1, 5.9, 5.8, 5.7, 5.6, 7.9, 7.7, 7.6, 7.4},
         {5000, 5040, 5090, 5130, 5170, 5220, 5260, 5310, 5350, 5400},
         {140.0, 141.5, 143.2, 144.8, 146.0, 147.9, 149.1, 150.6, 152.0, 153.8},
         {6, 5, 7, 6, 5, 8, 6, 7, 5, 6},
         {4.0, 4.2, 4.1, 3.9, 3.8, 3.6, 3.5, 3.3, 3.1, 3.0}},
        {"FBK",
         {3.1, 3.0, 3.2, 2.9, 2.8, 2.8, 4.1, 4.0, 3.9, 3.8},
         {800, 812, 825, 840, 851, 866, 880, 892, 905, 918},
         {25.0, 25.6, 26.1, 26.9, 27.4, 28.0, 28.7, 29.1, 29.8, 30.4},
         {0, 1, 0, 0, 1, 0, 1, 0, 0, 1},
         {0.5, 0.4, 0.6, 0.5, 0.4, 0.3, 0.3, 0.2, 0.2, 0.1}},
    };
    return series;
}

void seed_metadata(MetadataStore& s) {
    using K = ConceptKind;
    const Date origin = d("1990-01-01");

    s.create_concept(K::Function, "Financial Supervision", "supervision of banks and financial institutions", {},
                     origin, "fn_fin_supervision");
    s.create_concept(K::Function, "Credit Management", "management of credit flow to priority sectors", {}, origin,
                     "fn_credit_mgmt");

    s.create_concept(K::InternalEntity, "Banking Supervision Department", "department of banking supervision",
                     {{"code", Scalar{std::string("DBS")}}}, origin, "dept_bsd");
    s.create_concept(K::InternalEntity, "Rural Planning and Credit Department", "rural planning and credit",
                     {{"code", Scalar{std::string("RPCD")}}}, origin, "dept_rpcd");

    s.create_concept(K::ExternalEntity, "Bank", "commercial banks regulated by the central bank", {}, origin, "bank");
    s.create_concept(K::ExternalEntity, "Foreign Bank", "banks incorporated abroad", {}, origin, "bank_foreign");
    s.create_concept(K::ExternalEntity, "Nationalized Bank", "banks owned by the government", {}, origin,
                     "bank_nationalized");
    s.create_concept(K::ExternalEntity, "Rural Bank", "regional rural banks", {}, origin, "bank_rural");

    auto bank_attrs = [](const char* code, const char* type, double branches) {
        return Attributes{{"bank_code", Scalar{std::string(code)}},
                          {"bank_type", Scalar{std::string(type)}},
                          {"branches", Scalar{branches}}};
    };
    s.create_concept(K::ExternalEntity, "XYZ Bank", "scheduled commercial bank", bank_attrs("XYZ", "Rural", 120),
                     d("1995-01-01"), "bank_xyz");
    s.update_concept("bank_xyz", ConceptChanges{{}, {}, bank_attrs("XYZ", "Nationalized", 185)}, d("2000-10-01"));
    s.create_concept(K::ExternalEntity, "PQR Bank", "scheduled commercial bank", bank_attrs("PQR", "Rural", 65),
                     d("1995-01-01"), "bank_pqr");
    s.retire_concept("bank_pqr", d("2000-10-01"));
    s.create_concept(K::ExternalEntity, "SBX Bank", "scheduled commercial bank",
                     bank_attrs("SBX", "Nationalized", 900), origin, "bank_sbx");
    s.create_concept(K::ExternalEntity, "FBK Bank", "scheduled commercial bank", bank_attrs("FBK", "Foreign", 12),
                     d("1993-06-01"), "bank_fbk");

    s.create_concept(K::BusinessConcept, "bank type", "classification of banks into Nationalized, Foreign, Rural",
                     {}, origin, "bank_type");
    s.create_concept(K::BusinessConcept, "non-performing asset (NPA)",
                     "a loan whose interest or principal remains unpaid for more than 180 days", {},
                     d("1997-04-01"), "npa");
    s.update_concept("npa",
                     ConceptChanges{{}, std::string("a loan whose interest or principal remains unpaid for more than 90 days"), {}},
                     d("2000-07-01"));

    s.create_concept(K::Goal, "fraud detection", "detect and report frauds in banks", {}, origin, "goal_fraud");
    s.create_concept(K::Goal, "financial supervision", "sound and solvent banking system", {}, origin,
                     "goal_finsup");
    s.create_concept(K::Goal, "NPA below prescribed share of gross assets",
                     "non-performing assets to be less than 10 percent of gross assets", {}, d("1997-04-01"),
                     "goal_npa");
    s.create_concept(K::Goal, "agri-credit growth", "credit to agriculture sector to grow at expected rate", {},
                     origin, "goal_agri");

    s.create_concept(K::Process, "Bank supervision", "periodic supervision of banks", {}, origin, "proc_supervision");
    s.create_concept(K::Process, "On-site inspection", "inspection at bank premises", {}, origin, "proc_onsite");
    s.create_concept(K::Process, "Off-site surveillance", "analysis of periodic returns", {}, origin, "proc_offsite");
    s.create_concept(K::Process, "Priority sector lending review", "review of lending to priority sectors", {},
                     origin, "proc_rural_credit");

    s.create_concept(K::Measure, "Reported fraud cases", "frauds reported per bank per quarter", {}, origin,
                     "meas_fraud");
    s.create_concept(K::Measure, "NPA ratio", "non-performing assets as percent of gross assets, per bank per quarter",
                     {}, d("1997-04-01"), "meas_npa");
    s.create_concept(K::Measure, "Income Interest", "interest income recorded for every quarter for every bank", {},
                     origin, "meas_income");
    s.create_concept(K::Measure, "Agricultural credit", "growth of credit to agriculture, percent per quarter", {},
                     origin, "meas_agri");

    s.create_concept(K::ExternalEvent, "Asian financial crisis", "regional currency and banking crisis", {},
                     d("1997-07-01"), "ev_crisis");
    s.create_concept(K::ExternalEvent, "XYZ Bank branch expansion approval", "licence for new rural branches", {},
                     d("1999-01-15"), "ev_branch");
    s.create_concept(K::ExternalEvent, "Prudential norms revision", "NPA recognition period shortened to 90 days",
                     {}, d("2000-06-15"), "ev_norms");
    s.create_concept(K::ExternalEvent, "merger of two banks", "XYZ Bank acquires PQR Bank", {}, d("2000-09-15"),
                     "ev_merger");

    using A = AssociationKind;
    auto assoc = [&](A kind, const char* src, const char* dst, const char* from, const char* to = nullptr) {
        const std::string id = s.create_association(kind, src, dst, d(from));
        if (to) s.end_association(id, d(to));
    };
    assoc(A::SubEntity, "bank", "bank_foreign", "1990-01-01");
    assoc(A::SubEntity, "bank", "bank_nationalized", "1990-01-01");
    assoc(A::SubEntity, "bank", "bank_rural", "1990-01-01");
    assoc(A::SubEntity, "bank_rural", "bank_xyz", "1995-01-01", "2000-10-01");
    assoc(A::SubEntity, "bank_nationalized", "bank_xyz", "2000-10-01");
    assoc(A::SubEntity, "bank_rural", "bank_pqr", "1995-01-01");
    assoc(A::SubEntity, "bank_nationalized", "bank_sbx", "1990-01-01");
    assoc(A::SubEntity, "bank_foreign", "bank_fbk", "1993-06-01");

    assoc(A::EGoal, "dept_bsd", "goal_fraud", "1990-01-01");
    assoc(A::EGoal, "dept_bsd", "goal_finsup", "1990-01-01");
    assoc(A::EGoal, "dept_rpcd", "goal_agri", "1990-01-01");
    assoc(A::EGoal, "bank", "goal_npa", "1997-04-01");
    assoc(A::EntityProcess, "dept_bsd", "proc_supervision", "1990-01-01");
    assoc(A::EntityProcess, "dept_rpcd", "proc_rural_credit", "1990-01-01");
    assoc(A::SubProcess, "proc_supervision", "proc_onsite", "1990-01-01");
    assoc(A::SubProcess, "proc_supervision", "proc_offsite", "1990-01-01");
    assoc(A::PGoal, "proc_supervision", "goal_finsup", "1990-01-01");
    assoc(A::PGoal, "proc_rural_credit", "goal_agri", "1990-01-01");
    assoc(A::SubGoal, "goal_finsup", "goal_npa", "1997-04-01");

    assoc(A::GoalMeasure, "goal_fraud", "meas_fraud", "1990-01-01");
    assoc(A::GoalMeasure, "goal_finsup", "meas_npa", "1997-04-01");
    assoc(A::GoalMeasure, "goal_finsup", "meas_income", "1990-01-01");
    assoc(A::GoalMeasure, "goal_npa", "meas_npa", "1997-04-01");
    assoc(A::GoalMeasure, "goal_agri", "meas_agri", "1990-01-01");

    assoc(A::EventImpacts, "ev_crisis", "bank", "1997-07-01", "1998-12-31");
    assoc(A::EventImpacts, "ev_branch", "bank_xyz", "1999-01-15", "1999-12-31");
    assoc(A::EventImpacts, "ev_norms", "npa", "2000-06-15");
    assoc(A::EventImpacts, "ev_merger", "bank_xyz", "2000-09-15", "2001-03-15");
    assoc(A::EventImpacts, "ev_merger", "bank_pqr", "2000-09-15", "2000-10-01");
    assoc(A::EventRelated, "ev_norms", "ev_crisis", "2000-06-15");

    assoc(A::AttributeSpec, "bank", "bank_type", "1990-01-01");
}

void seed_warehouse(Warehouse& w) {
    w.define_dimension({"Bank", "bank_code", {"bank_code", "name", "bank_type"}});
    auto row = [&](const char* code, const char* name, const char* type, const char* from) {
        w.upsert_dim_row("Bank", code,
                         {{"name", Scalar{std::string(name)}}, {"bank_type", Scalar{std::string(type)}}}, d(from));
    };
    row("SBX", "SBX Bank", "Nationalized", "1990-01-01");
    row("FBK", "FBK Bank", "Foreign", "1993-06-01");
    row("XYZ", "XYZ Bank", "Rural", "1995-01-01");
    row("PQR", "PQR Bank", "Rural", "1995-01-01");
    row("XYZ", "XYZ Bank", "Nationalized", "2000-10-01");

    w.define_fact({"NPAQuarterly", {"Bank"}, {"npa_ratio", "gross_assets"}});
    w.define_fact({"IncomeFact", {"Bank"}, {"interest_income"}});
    w.define_fact({"FraudFact", {"Bank"}, {"cases"}});
    w.define_fact({"AgriCredit", {"Bank"}, {"agri_credit"}});

    std::vector<FactRow> rows;
    for (const BankSeries& b : bank_series()) {
        for (std::size_t q = 0; q < b.npa_ratio.size(); ++q) {
            const std::map<std::string, std::string> keys{{"Bank", b.code}};
            const Date t = d(kQuarterEnds[q]);
            rows.push_back({"NPAQuarterly", keys, t, {{"npa_ratio", b.npa_ratio[q]}, {"gross_assets", b.gross_assets[q]}}});
            rows.push_back({"IncomeFact", keys, t, {{"interest_income", b.interest_income[q]}}});
            rows.push_back({"FraudFact", keys, t, {{"cases", b.fraud_cases[q]}}});
            rows.push_back({"AgriCredit", keys, t, {{"agri_credit", b.agri_credit[q]}}});
        }
    }
    w.insert_facts(rows);
}

void seed_links(Repository& r) {
    auto link = [&](LinkKind kind, const char* concept_id, LinkTarget target, const char* from,
                    const char* to = nullptr) {
        const std::string id = r.link(kind, concept_id, target, d(from));
        if (to) r.end_link(id, d(to));
    };
    using L = LinkKind;
    link(L::ConceptDimension, "bank", LinkTarget::dimension_of("Bank"), "1990-01-01");
    link(L::ConceptDimRow, "bank_xyz", LinkTarget::row("Bank", "XYZ"), "1995-01-01");
    link(L::ConceptDimRow, "bank_pqr", LinkTarget::row("Bank", "PQR"), "1995-01-01", "2000-10-01");
    link(L::ConceptDimRow, "bank_sbx", LinkTarget::row("Bank", "SBX"), "1990-01-01");
    link(L::ConceptDimRow, "bank_fbk", LinkTarget::row("Bank", "FBK"), "1993-06-01");
    link(L::ConceptDimRow, "bank_rural", LinkTarget::row("Bank", "XYZ"), "1995-01-01", "2000-10-01");
    link(L::ConceptDimRow, "bank_rural", LinkTarget::row("Bank", "PQR"), "1995-01-01", "2000-10-01");
    link(L::ConceptDimRow, "bank_nationalized", LinkTarget::row("Bank", "XYZ"), "2000-10-01");
    link(L::ConceptDimRow, "bank_nationalized", LinkTarget::row("Bank", "SBX"), "1990-01-01");
    link(L::ConceptDimRow, "bank_foreign", LinkTarget::row("Bank", "FBK"), "1993-06-01");

    link(L::MeasureFact, "meas_npa", LinkTarget::fact_column("NPAQuarterly", "npa_ratio"), "1997-04-01");
    link(L::MeasureFact, "meas_income", LinkTarget::fact_column("IncomeFact", "interest_income"), "1990-01-01");
    link(L::MeasureFact, "meas_fraud", LinkTarget::fact_column("FraudFact", "cases"), "1990-01-01");
    link(L::MeasureFact, "meas_agri", LinkTarget::fact_column("AgriCredit", "agri_credit"), "1990-01-01");
}

}  // namespace

void seed_demo(Repository& repo) {
    Repository staged = repo;
    seed_metadata(staged.store());
    seed_warehouse(staged.warehouse());
    seed_links(staged);
    repo = std::move(staged);
}

Repository demo_repository() {
    Repository repo;
    seed_demo(repo);
    return repo;
}

}  // namespace bizmeta
