#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "bizmeta/codec.hpp"
#include "bizmeta/demo_fixture.hpp"
#include "bizmeta/error.hpp"
#include "bizmeta/navql.hpp"
#include "bizmeta/ndjson.hpp"
#include "bizmeta/service.hpp"

namespace bizmeta::cli {

namespace {

Repository open_store(const std::string& path) { return ndjson::import_repository(ndjson::read_file(path)); }

void save_store(const std::string& path, const Repository& repo) {
    ndjson::write_file_atomic(path, ndjson::export_repository(repo));
}

std::string cell_text(const codec::Json& j) {
    if (j.is_null()) return "-";
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("date")) return j["date"].get<std::string>();
    return j.dump();
}

void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << cells[c];
            if (c + 1 < cells.size()) out << std::string(width[c] - cells[c].size() + 2, ' ');
        }
        out << '\n';
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& row : rows) line(row);
}

void print_versions(std::ostream& out, const codec::Json& versions) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& v : versions) {
        rows.push_back({v["id"].get<std::string>(), std::to_string(v["v"].get<int>()), v["kind"].get<std::string>(),
                        v["name"].get<std::string>(), v["description"].get<std::string>(), cell_text(v["from"]),
                        cell_text(v["to"])});
    }
    print_table(out, {"id", "v", "kind", "name", "description", "from", "to"}, rows);
}

void print_result(std::ostream& out, const codec::Json& result) {
    const std::string type = result["type"];
    if (type == "concepts") {
        print_versions(out, result["items"]);
    } else if (type == "history") {
        print_versions(out, result["versions"]);
    } else {
        const auto& table = result["table"];
        std::vector<std::string> header = table["columns"].get<std::vector<std::string>>();
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : table["rows"]) {
            std::vector<std::string> cells;
            for (const auto& c : r) cells.push_back(cell_text(c));
            rows.push_back(std::move(cells));
        }
        out << "fact " << result["fact"].get<std::string>() << '\n';
        print_table(out, header, rows);
    }
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected addr:port");
    int port = 0;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--bind", "port is not a number");
    }
    if (port < 0 || port > 65535) throw CLI::ValidationError("--bind", "port out of range");
    return {bind.substr(0, colon), port};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal business-metadata repository", "bizmeta"};
    app.require_subcommand(1);

    std::string store;
    std::string input;
    std::string output;
    std::string query_text;
    std::string now_text;
    std::string format = "table";
    std::string id;
    std::string bind = "127.0.0.1:8080";

    auto* init = app.add_subcommand("init", "create an empty store file");
    init->add_option("store", store)->required();

    auto* load = app.add_subcommand("load", "import NDJSON records into a store");
    load->add_option("store", store)->required();
    load->add_option("file", input)->required();

    auto* exp = app.add_subcommand("export", "write the canonical export");
    exp->add_option("store", store)->required();
    exp->add_option("-o,--output", output, "output file (default stdout)");

    auto* query = app.add_subcommand("query", "evaluate a NavQL query");
    query->add_option("store", store)->required();
    query->add_option("-q,--query", query_text)->required();
    query->add_option("--now", now_text, "reference date (default: latest date in the store)");
    query->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* history = app.add_subcommand("history", "print every version of a concept");
    history->add_option("store", store)->required();
    history->add_option("--id", id)->required();

    auto* serve = app.add_subcommand("serve", "serve the HTTP API");
    serve->add_option("store", store)->required();
    serve->add_option("--bind", bind, "addr:port");

    auto* seed = app.add_subcommand("seed-demo", "load the bundled central-bank fixture");
    seed->add_option("store", store)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*init) {
            if (std::filesystem::exists(store)) throw Conflict("store '" + store + "' already exists");
            save_store(store, Repository{});
        } else if (*load) {
            Repository repo = open_store(store);
            ndjson::import_into(repo, ndjson::read_file(input));
            save_store(store, repo);
        } else if (*exp) {
            const std::string text = ndjson::export_repository(open_store(store));
            if (output.empty()) {
                out << text;
            } else {
                ndjson::write_file_atomic(output, text);
            }
        } else if (*query) {
            const Repository repo = open_store(store);
            const Date now = now_text.empty() ? repo.max_known_date() : Date::parse(now_text);
            const codec::Json result = codec::to_json(navql::evaluate(navql::parse(query_text), repo, now));
            if (format == "json") {
                out << result.dump() << '\n';
            } else {
                print_result(out, result);
            }
        } else if (*history) {
            print_versions(out, codec::versions(open_store(store).store().get_history(id)));
        } else if (*serve) {
            std::pair<std::string, int> addr;
            try {
                addr = parse_bind(bind);
            } catch (const CLI::ParseError& e) {
                err << "usage error: " << e.what() << '\n';
                return 2;
            }
            Service service(open_store(store), store);
            err << "serving " << store << " on " << addr.first << ':' << addr.second << '\n';
            if (!service.listen(addr.first, addr.second)) throw BadRequest("cannot bind " + bind);
        } else if (*seed) {
            Repository repo = std::filesystem::exists(store) ? open_store(store) : Repository{};
            seed_demo(repo);
            save_store(store, repo);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace bizmeta::cli
