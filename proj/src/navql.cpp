#include "bizmeta/navql.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bizmeta/error.hpp"

namespace bizmeta::navql {

namespace {

enum class Tok { ident, id_ref, string, number, date, punct, end, bad };

struct Token {
    Tok type = Tok::end;
    std::size_t offset = 0;
    std::string text;    // identifier, id, decoded string, punctuation, or raw bad text
    double number = 0.0;
    Date date;
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_id_char(char c) { return is_alpha(c) || is_digit(c) || c == '-'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t = next();
            const bool stop = t.type == Tok::end || t.type == Tok::bad;
            out.push_back(std::move(t));
            if (stop) break;
        }
        return out;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
    }

    Token bad(std::size_t at, std::string text) {
        Token t;
        t.type = Tok::bad;
        t.offset = at;
        t.text = std::move(text);
        return t;
    }

    Token next() {
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size()) return t;
        const char c = src_[pos_];
        if (is_alpha(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && (is_alpha(src_[end]) || is_digit(src_[end]))) ++end;
            t.type = Tok::ident;
            t.text = std::string(src_.substr(pos_, end - pos_));
            pos_ = end;
            return t;
        }
        if (c == '#') {
            std::size_t end = pos_ + 1;
            while (end < src_.size() && is_id_char(src_[end])) ++end;
            if (end == pos_ + 1) return bad(pos_, "#");
            t.type = Tok::id_ref;
            t.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end;
            return t;
        }
        if (c == '"') return lex_string();
        if (is_digit(c) || (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) return lex_number();
        static constexpr std::string_view two[] = {"!=", "<=", ">="};
        for (auto p : two) {
            if (src_.substr(pos_, 2) == p) {
                t.type = Tok::punct;
                t.text = std::string(p);
                pos_ += 2;
                return t;
            }
        }
        if (std::string_view("().,=<>[]").find(c) != std::string_view::npos) {
            t.type = Tok::punct;
            t.text = std::string(1, c);
            ++pos_;
            return t;
        }
        return bad(pos_, std::string(1, c));
    }

    Token lex_string() {
        const std::size_t start = pos_;
        std::string value;
        ++pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '"') {
                ++pos_;
                Token t;
                t.type = Tok::string;
                t.offset = start;
                t.text = std::move(value);
                return t;
            }
            if (c == '\\') {
                if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\')) {
                    value.push_back(src_[pos_ + 1]);
                    pos_ += 2;
                    continue;
                }
                return bad(pos_, "\\");
            }
            value.push_back(c);
            ++pos_;
        }
        return bad(start, "unterminated string");
    }

    Token lex_number() {
        const std::size_t start = pos_;
        // DATE: exactly YYYY-MM-DD.
        if (src_.size() - pos_ >= 10) {
            const std::string_view cand = src_.substr(pos_, 10);
            const bool shape = is_digit(cand[0]) && is_digit(cand[1]) && is_digit(cand[2]) && is_digit(cand[3]) &&
                               cand[4] == '-' && is_digit(cand[5]) && is_digit(cand[6]) && cand[7] == '-' &&
                               is_digit(cand[8]) && is_digit(cand[9]);
            const bool delimited = src_.size() - pos_ == 10 || !(is_digit(src_[pos_ + 10]) || is_alpha(src_[pos_ + 10]));
            if (shape && delimited) {
                auto d = Date::try_parse(cand);
                if (!d) return bad(start, std::string(cand));
                Token t;
                t.type = Tok::date;
                t.offset = start;
                t.date = *d;
                t.text = std::string(cand);
                pos_ += 10;
                return t;
            }
        }
        std::size_t end = pos_;
        if (src_[end] == '-') ++end;
        while (end < src_.size() && is_digit(src_[end])) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            const std::size_t frac = end;
            while (end < src_.size() && is_digit(src_[end])) ++end;
            if (end == frac) return bad(start, std::string(src_.substr(start, end - start)));
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
            const std::size_t digits = exp;
            while (exp < src_.size() && is_digit(src_[exp])) ++exp;
            if (exp == digits) return bad(start, std::string(src_.substr(start, exp - start)));
            end = exp;
        }
        if (end < src_.size() && (is_alpha(src_[end]) || is_digit(src_[end]))) {
            return bad(start, std::string(src_.substr(start, end + 1 - start)));
        }
        double value = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + end, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + end || !std::isfinite(value)) {
            return bad(start, std::string(src_.substr(start, end - start)));
        }
        Token t;
        t.type = Tok::number;
        t.offset = start;
        t.number = value;
        t.text = std::string(src_.substr(start, end - start));
        pos_ = end;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::string describe(const Token& t) {
    switch (t.type) {
        case Tok::end: return "end of input";
        case Tok::ident: return "'" + t.text + "'";
        case Tok::id_ref: return "'#" + t.text + "'";
        case Tok::string: return "string";
        case Tok::number: return "number " + t.text;
        case Tok::date: return "date " + t.text;
        case Tok::punct: return "'" + t.text + "'";
        case Tok::bad: return "invalid input '" + t.text + "'";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

    Query query() {
        Query q;
        q.start = start();
        bool history_seen = false;
        while (is_punct(".")) {
            const Token& after = peek(1);
            if (after.type == Tok::ident && after.text == "data" && !history_seen) break;
            if (history_seen) fail({"ASOF", "DURING", "end of input"});
            advance();
            q.chain.push_back(step());
            history_seen = std::holds_alternative<HistoryStep>(q.chain.back());
        }
        q.temporal = temporal();
        if (is_punct(".")) {
            if (history_seen) fail({"end of input"});
            advance();
            if (!is_ident("data")) fail({"data"});
            q.data = data_tail();
        }
        if (peek().type != Tok::end) {
            std::vector<std::string> expected;
            if (!history_seen && q.data == std::nullopt) expected.push_back(".");
            if (std::holds_alternative<DefaultTime>(q.temporal) && q.data == std::nullopt) {
                expected.push_back("ASOF");
                expected.push_back("DURING");
            }
            expected.push_back("end of input");
            fail(expected);
        }
        return q;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    bool is_punct(std::string_view p) const { return peek().type == Tok::punct && peek().text == p; }
    bool is_ident(std::string_view s) const { return peek().type == Tok::ident && peek().text == s; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(peek().offset, std::move(expected), describe(peek()));
    }

    void expect_punct(std::string_view p) {
        if (!is_punct(p)) fail({std::string(p)});
        advance();
    }

    Start start() {
        if (peek().type == Tok::id_ref) {
            IdRef ref{peek().text};
            advance();
            return ref;
        }
        if (peek().type != Tok::ident || !selector_kinds(peek().text)) fail({"KIND", "#ID"});
        KindSelector sel{peek().text, {}};
        advance();
        expect_punct("(");
        if (is_punct(")")) {
            advance();
            return sel;
        }
        while (true) {
            if (peek().type != Tok::ident) fail(sel.preds.empty() ? std::vector<std::string>{"ATTR", ")"}
                                                                  : std::vector<std::string>{"ATTR"});
            AttrEquals p;
            p.attr = peek().text;
            advance();
            expect_punct("=");
            if (peek().type != Tok::string) fail({"STRING"});
            p.value = peek().text;
            advance();
            sel.preds.push_back(std::move(p));
            if (is_punct(",")) {
                advance();
                continue;
            }
            if (!is_punct(")")) fail({",", ")"});
            advance();
            return sel;
        }
    }

    Step step() {
        if (peek().type != Tok::ident || (peek().text != "history" && !is_traversal_method(peek().text))) {
            fail({"METHOD", "history"});
        }
        const std::string name = peek().text;
        advance();
        expect_punct("(");
        expect_punct(")");
        if (name == "history") return HistoryStep{};
        return MethodStep{name};
    }

    Date date() {
        if (peek().type != Tok::date) fail({"DATE"});
        Date d = peek().date;
        advance();
        return d;
    }

    Temporal temporal() {
        if (is_ident("ASOF")) {
            advance();
            const Date at = date();
            return AsOf{at};
        }
        if (is_ident("DURING")) {
            advance();
            expect_punct("[");
            const Date from = date();
            expect_punct(",");
            const std::size_t to_offset = peek().offset;
            const Date to = date();
            if (!(from < to)) {
                throw ParseError(to_offset, {"DATE after " + from.to_string()}, "date " + to.to_string());
            }
            expect_punct(")");
            return During{from, to};
        }
        return DefaultTime{};
    }

    AttrRef attr_ref() {
        if (peek().type != Tok::ident) fail({"ATTRREF"});
        AttrRef ref;
        ref.dimension = peek().text;
        advance();
        expect_punct(".");
        if (peek().type != Tok::ident) fail({"ATTR"});
        ref.attr = peek().text;
        advance();
        return ref;
    }

    Aggregate agg() {
        if (peek().type != Tok::ident || !parse_agg_fn(peek().text)) fail({"sum", "avg", "min", "max", "count"});
        Aggregate a;
        a.fn = *parse_agg_fn(peek().text);
        advance();
        expect_punct("(");
        if (peek().type != Tok::ident) fail({"COLUMN"});
        a.column = peek().text;
        advance();
        expect_punct(")");
        return a;
    }

    Scalar literal() {
        const Token& t = peek();
        Scalar out;
        if (t.type == Tok::string) out = t.text;
        else if (t.type == Tok::number) out = t.number;
        else if (t.type == Tok::date) out = t.date;
        else fail({"STRING", "NUMBER", "DATE"});
        advance();
        return out;
    }

    Predicate dpred() {
        Predicate p;
        p.ref = attr_ref();
        if (peek().type != Tok::punct || peek().text == "." || !parse_compare_op(peek().text) ||
            peek().text == "<>") {
            fail({"=", "!=", "<", "<=", ">", ">="});
        }
        p.op = *parse_compare_op(peek().text);
        advance();
        p.value = literal();
        return p;
    }

    DataSpec data_tail() {
        advance();  // "data"
        expect_punct("(");
        DataSpec spec;
        spec.aggs.push_back(agg());
        while (is_punct(",")) {
            advance();
            spec.aggs.push_back(agg());
        }
        if (is_ident("BY")) {
            advance();
            spec.group_by.push_back(attr_ref());
            while (is_punct(",")) {
                advance();
                spec.group_by.push_back(attr_ref());
            }
        }
        if (is_ident("WHERE")) {
            advance();
            spec.where.push_back(dpred());
            while (is_ident("AND")) {
                advance();
                spec.where.push_back(dpred());
            }
        }
        if (is_ident("FROM")) {
            advance();
            const Date from = date();
            if (!is_ident("TO")) fail({"TO"});
            advance();
            const std::size_t to_offset = peek().offset;
            const Date to = date();
            if (!(from < to)) {
                throw ParseError(to_offset, {"DATE after " + from.to_string()}, "date " + to.to_string());
            }
            spec.range = DateRange{from, to};
        }
        if (!is_punct(")")) {
            std::vector<std::string> expected;
            if (spec.group_by.empty() && spec.where.empty() && !spec.range) expected.push_back(",");
            if (spec.group_by.empty() && spec.where.empty() && !spec.range) expected.push_back("BY");
            if (spec.where.empty() && !spec.range) expected.push_back("WHERE");
            if (!spec.where.empty() && !spec.range) expected.push_back("AND");
            if (!spec.range) expected.push_back("FROM");
            expected.push_back(")");
            fail(expected);
        }
        advance();
        return spec;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string print_literal(const Scalar& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
    return scalar_to_text(v);
}

}  // namespace

std::optional<std::set<ConceptKind>> selector_kinds(std::string_view kind) {
    if (kind == "Entity") return std::set<ConceptKind>{ConceptKind::InternalEntity, ConceptKind::ExternalEntity};
    if (auto k = parse_concept_kind(kind)) return std::set<ConceptKind>{*k};
    return std::nullopt;
}

Query parse(std::string_view text) { return Parser(text).query(); }

std::string print(const Query& query) {
    std::string out;
    if (const auto* ref = std::get_if<IdRef>(&query.start)) {
        out = "#" + ref->id;
    } else {
        const auto& sel = std::get<KindSelector>(query.start);
        out = sel.kind + "(";
        for (std::size_t i = 0; i < sel.preds.size(); ++i) {
            if (i > 0) out += ", ";
            out += sel.preds[i].attr + "=" + quote(sel.preds[i].value);
        }
        out += ")";
    }
    for (const Step& s : query.chain) {
        if (const auto* m = std::get_if<MethodStep>(&s)) out += "." + m->name + "()";
        else out += ".history()";
    }
    if (const auto* a = std::get_if<AsOf>(&query.temporal)) out += " ASOF " + a->date.to_string();
    if (const auto* d = std::get_if<During>(&query.temporal)) {
        out += " DURING [" + d->from.to_string() + "," + d->to.to_string() + ")";
    }
    if (query.data) {
        const DataSpec& spec = *query.data;
        out += ".data(";
        for (std::size_t i = 0; i < spec.aggs.size(); ++i) {
            if (i > 0) out += ", ";
            out += std::string(to_string(spec.aggs[i].fn)) + "(" + spec.aggs[i].column + ")";
        }
        for (std::size_t i = 0; i < spec.group_by.size(); ++i) {
            out += (i == 0 ? " BY " : ", ") + spec.group_by[i].dimension + "." + spec.group_by[i].attr;
        }
        for (std::size_t i = 0; i < spec.where.size(); ++i) {
            const Predicate& p = spec.where[i];
            out += (i == 0 ? " WHERE " : " AND ") + p.ref.dimension + "." + p.ref.attr + " " +
                   std::string(to_string(p.op)) + " " + print_literal(p.value);
        }
        if (spec.range) out += " FROM " + spec.range->from.to_string() + " TO " + spec.range->to.to_string();
        out += ")";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct TimeContext {
    std::optional<Date> at;               // ASOF
    std::optional<ValidInterval> window;  // DURING
};

bool selector_matches(const ConceptVersion& v, const std::vector<AttrEquals>& preds) {
    for (const auto& p : preds) {
        if (p.attr == "name") {
            if (v.name != p.value) return false;
        } else if (p.attr == "description") {
            if (v.description != p.value) return false;
        } else {
            auto it = v.attributes.find(p.attr);
            if (it == v.attributes.end() || scalar_to_text(it->second) != p.value) return false;
        }
    }
    return true;
}

std::set<std::string> resolve_start(const Start& start, const Repository& repo, const TimeContext& tc,
                                    std::set<ConceptKind>& kinds) {
    const MetadataStore& store = repo.store();
    std::set<std::string> out;
    if (const auto* ref = std::get_if<IdRef>(&start)) {
        kinds = {store.kind_of(ref->id)};
        const bool live = tc.at ? store.live_at(ref->id, *tc.at) : store.live_during(ref->id, *tc.window);
        if (live) out.insert(ref->id);
        return out;
    }
    const auto& sel = std::get<KindSelector>(start);
    kinds = *selector_kinds(sel.kind);
    for (ConceptKind k : kinds) {
        for (const std::string& id : store.ids_of_kind(k)) {
            if (tc.at) {
                auto v = store.get_as_of(id, *tc.at);
                if (v && selector_matches(*v, sel.preds)) out.insert(id);
            } else {
                for (const ConceptVersion& v : store.get_history(id)) {
                    if (v.interval.overlaps(*tc.window) && selector_matches(v, sel.preds)) {
                        out.insert(id);
                        break;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

Result evaluate(const Query& query, const Repository& repo, Date now) {
    TimeContext tc;
    if (const auto* a = std::get_if<AsOf>(&query.temporal)) tc.at = a->date;
    else if (const auto* d = std::get_if<During>(&query.temporal)) tc.window = ValidInterval::between(d->from, d->to);
    else tc.at = now;

    std::set<ConceptKind> kinds;
    std::set<std::string> current = resolve_start(query.start, repo, tc, kinds);

    for (const Step& step : query.chain) {
        if (std::holds_alternative<HistoryStep>(step)) {
            if (current.size() != 1) {
                throw BadRequest("history() requires exactly one concept, got " + std::to_string(current.size()));
            }
            HistoryResult h;
            h.id = *current.begin();
            h.versions = repo.store().get_history(h.id);
            return h;
        }
        const std::string& method = std::get<MethodStep>(step).name;
        std::set<ConceptKind> next_kinds;
        for (ConceptKind k : kinds) {
            if (!dispatch(method, k)) {
                throw BadRequest("method '" + method + "' is inapplicable to kind " + std::string(to_string(k)));
            }
            auto produced = result_kinds(method, k);
            next_kinds.insert(produced.begin(), produced.end());
        }
        std::set<std::string> next;
        for (const std::string& id : current) {
            auto hop = tc.at ? repo.navigate(id, method, *tc.at) : repo.navigate_during(id, method, *tc.window);
            next.insert(hop.begin(), hop.end());
        }
        kinds = std::move(next_kinds);
        current = std::move(next);
    }

    if (query.data) {
        if (kinds != std::set<ConceptKind>{ConceptKind::Measure}) {
            throw BadRequest("data() requires the navigation to end on Measure concepts");
        }
        if (current.empty()) throw BadRequest("data() has no measures to aggregate");
        std::optional<std::string> fact;
        for (const std::string& id : current) {
            const FactRef ref = tc.at ? repo.get_facts(id, *tc.at) : repo.get_facts_during(id, *tc.window);
            if (fact && *fact != ref.fact) {
                throw BadRequest("data() over measures mapping to different fact tables (" + *fact + ", " +
                                 ref.fact + ")");
            }
            fact = ref.fact;
        }
        FactQuery fq;
        fq.fact = *fact;
        fq.where = query.data->where;
        fq.group_by = query.data->group_by;
        fq.agg = query.data->aggs;
        if (query.data->range) fq.time_range = ValidInterval::between(query.data->range->from, query.data->range->to);
        DataResult r;
        r.fact = *fact;
        r.measures.assign(current.begin(), current.end());
        r.table = repo.warehouse().query_facts(fq);
        return r;
    }

    ConceptSetResult out;
    for (const std::string& id : current) {
        auto v = tc.at ? repo.store().get_as_of(id, *tc.at) : repo.store().get_during(id, *tc.window);
        if (v) out.concepts.push_back(std::move(*v));
    }
    return out;
}

}  // namespace bizmeta::navql
