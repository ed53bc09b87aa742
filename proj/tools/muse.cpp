// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <muse/muse.hpp>

namespace
{
    using nlohmann::json;

    enum class Units
    {
        dbm,
        w,
        both
    };

    std::string power_text(double watts, Units u)
    {
        char buf[96];
        switch (u)
        {
        case Units::dbm:
            std::snprintf(buf, sizeof buf, "%.2f dBm", muse::watts_to_dbm(watts));
            break;
        case Units::w:
            std::snprintf(buf, sizeof buf, "%.6e W", watts);
            break;
        case Units::both:
            std::snprintf(buf, sizeof buf, "%.2f dBm (%.4g mW)", muse::watts_to_dbm(watts), watts * 1e3);
            break;
        }
        return buf;
    }

    // Non-finite values (e.g. -inf dBm for zero power) become null.
    json power_json(double watts, Units u)
    {
        json o;
        if (u != Units::w)
        {
            const double dbm = muse::watts_to_dbm(watts);
            o["dbm"] = std::isfinite(dbm) ? json(dbm) : json(nullptr);
        }
        if (u != Units::dbm)
            o["w"] = watts;
        return o;
    }

    // Writes to --out when given, else stdout.
    class Output
    {
    public:
        explicit Output(const std::string &path)
        {
            if (!path.empty())
            {
                file_.open(path, std::ios::binary);
                if (!file_)
                    throw muse::IoError("cannot write " + path);
            }
        }
        std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }
        void close()
        {
            if (file_.is_open())
            {
                file_.close();
                if (!file_)
                    throw muse::IoError("write failed");
            }
        }

    private:
        std::ofstream file_;
    };

    muse::RFSystem load_valid(const std::string &path)
    {
        muse::RFSystem sys = muse::io::load_scenario(path);
        const auto report = muse::validate_system(sys);
        if (!report.valid())
        {
            const auto &v = report.violations.front();
            throw muse::ValidationError(v.entity + ": " + v.message);
        }
        return sys;
    }

    std::vector<double> parse_list(const std::string &text)
    {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            try
            {
                std::size_t used = 0;
                out.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            }
            catch (const std::exception &)
            {
                throw muse::ValidationError("bad list entry '" + item + "'");
            }
        }
        if (out.empty())
            throw muse::ValidationError("empty list");
        return out;
    }

    struct Options
    {
        std::string scenario;
        std::string out;
        std::string format = "text";
        Units units = Units::both;
        std::uint64_t seed = 0;
        double beta_db = 6.0;
        std::string hex_sides = "1,10,25,50,100";

        // point
        double x = 0, y = 0;
        std::size_t time = 0, band = 0;

        // map
        std::string heatmap_prefix;
        std::string heatmap_quantity = "opportunity";

        // report
        bool physical_area = false;

        // entity
        std::string id;

        // smf
        std::string truth_csv, other_csv, granted_csv;
        std::optional<double> cap_dbm;
        double p_missed = 0.0, fp_rate = 0.0, fp_power_dbm = 0.0, geo_sigma = 0.0, power_sigma_db = 0.0;

        // sweep
        bool worst_case = false;
    };

    int cmd_validate(const Options &o)
    {
        const muse::RFSystem sys = muse::io::load_scenario(o.scenario);
        const auto report = muse::validate_system(sys);
        json v = json::array();
        for (const auto &x : report.violations)
            v.push_back({{"entity", x.entity}, {"message", x.message}});
        Output out(o.out);
        out.stream() << json{{"valid", report.valid()}, {"violations", v}}.dump(2) << '\n';
        out.close();
        return report.valid() ? 0 : 2;
    }

    int cmd_point(const Options &o)
    {
        const muse::ConsumptionEngine engine(load_valid(o.scenario));
        const auto &g = engine.system().grid;
        if (!muse::detail::inside_region(g, {o.x, o.y}))
            throw muse::ValidationError("point outside the region");
        if (o.time >= g.horizon || o.band >= g.band_count())
            throw muse::ValidationError("time or band index outside the grid");
        const muse::Point rho{o.x, o.y};
        const auto m = engine.point_metrics(rho, o.time, o.band);
        const auto &p = engine.system().params;
        const double gamma = std::clamp(m.net_opportunity, 0.0, p.p_cmax() - std::min(m.occupancy, p.p_cmax()));
        Output out(o.out);
        auto &s = out.stream();
        if (o.format == "json")
        {
            json rx = json::array();
            for (const auto &r : m.receivers)
            {
                const auto &ref = engine.roster().receivers[r.receiver];
                rx.push_back({{"id", ref.rx->id},
                              {"sinr_db", muse::linear_to_db(engine.receiver_sinr(r.receiver, o.time, o.band))},
                              {"interference_margin", power_json(r.margin, o.units)},
                              {"tolerable_interference", power_json(r.opportunity.bound, o.units)},
                              {"opportunity", power_json(r.opportunity.opportunity, o.units)},
                              {"liability", power_json(r.liability, o.units)}});
            }
            json tx = json::array();
            for (std::size_t i = 0; i < m.received.size(); ++i)
                tx.push_back({{"id", engine.roster().transmitters[i].tx->id}, {"occupancy", power_json(m.received[i], o.units)}});
            s << json{{"point_m", {o.x, o.y}},
                      {"time_index", o.time},
                      {"band_index", o.band},
                      {"occupancy", power_json(m.occupancy, o.units)},
                      {"net_opportunity", power_json(m.net_opportunity, o.units)},
                      {"opportunity", power_json(gamma, o.units)},
                      {"transmitters", tx},
                      {"receivers", rx}}
                     .dump(2)
              << '\n';
        }
        else
        {
            s << "point (" << o.x << ", " << o.y << ") m, time " << o.time << ", band " << o.band << '\n';
            s << "spectrum occupancy      " << power_text(m.occupancy, o.units) << '\n';
            for (std::size_t i = 0; i < m.received.size(); ++i)
                s << "  transmitter " << engine.roster().transmitters[i].tx->id << "  "
                  << power_text(m.received[i], o.units) << '\n';
            for (const auto &r : m.receivers)
            {
                const auto &ref = engine.roster().receivers[r.receiver];
                char sinr[48];
                std::snprintf(sinr, sizeof sinr, "%.2f dB",
                              muse::linear_to_db(engine.receiver_sinr(r.receiver, o.time, o.band)));
                s << "receiver " << ref.rx->id << '\n';
                s << "  sinr                  " << sinr << '\n';
                s << "  interference margin   " << power_text(r.margin, o.units) << '\n';
                s << "  tolerable at point    " << power_text(r.opportunity.bound, o.units) << '\n';
                s << "  opportunity           " << power_text(r.opportunity.opportunity, o.units) << '\n';
                s << "  liability             " << power_text(r.liability, o.units) << '\n';
            }
            s << "net opportunity         " << power_text(m.net_opportunity, o.units) << '\n';
            s << "opportunity (clamped)   " << power_text(gamma, o.units) << '\n';
        }
        out.close();
        return 0;
    }

    int cmd_map(const Options &o)
    {
        const muse::ConsumptionEngine engine(load_valid(o.scenario));
        const auto cells = engine.consumption_map();
        Output out(o.out);
        muse::io::write_map_csv(out.stream(), cells);
        out.close();
        if (!o.heatmap_prefix.empty())
        {
            const auto q = o.heatmap_quantity == "occupancy"   ? muse::io::MapQuantity::occupancy
                           : o.heatmap_quantity == "liability" ? muse::io::MapQuantity::liability
                                                               : muse::io::MapQuantity::opportunity;
            const auto &g = engine.system().grid;
            for (std::size_t t = 0; t < g.horizon; ++t)
                for (std::size_t b = 0; b < g.band_count(); ++b)
                {
                    const std::string path =
                        o.heatmap_prefix + "_t" + std::to_string(t) + "_b" + std::to_string(b) + ".dat";
                    Output h(path);
                    muse::io::write_heatmap(h.stream(), cells, engine.lattice(), g.horizon, g.band_count(), t, b, q);
                    h.close();
                }
        }
        return 0;
    }

    int cmd_report(const Options &o)
    {
        const muse::ConsumptionEngine engine(load_valid(o.scenario));
        const auto r = engine.system_report();
        Output out(o.out);
        if (o.format == "json")
            out.stream() << muse::io::report_to_json(r, o.physical_area).dump(2) << '\n';
        else
            muse::io::write_report_text(out.stream(), r, o.physical_area);
        out.close();
        return 0;
    }

    int cmd_entity(const Options &o)
    {
        const muse::ConsumptionEngine engine(load_valid(o.scenario));
        muse::EntityQuery q;
        if (!o.id.empty())
            q.id = o.id;
        const auto set = muse::entity_selector(engine.system(), q);
        const auto rep = engine.system_report();
        const double v = engine.entity_consumption(set, rep);
        Output out(o.out);
        if (o.format == "json")
            out.stream() << json{{"id", o.id.empty() ? "system" : o.id},
                                 {"transmitters", set.transmitters.size()},
                                 {"receivers", set.receivers.size()},
                                 {"consumed_w_unit_region", v},
                                 {"fraction_of_total", v / rep.total}}
                                .dump(2)
                         << '\n';
        else
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s consumes %.6e W*unit-region (%.4f%% of total)\n",
                          o.id.empty() ? "system" : o.id.c_str(), v, 100.0 * v / rep.total);
            out.stream() << buf;
        }
        out.close();
        return 0;
    }

    int cmd_smf(const Options &o)
    {
        muse::OpportunityMap truth, other;
        double p_cmax = muse::SystemParams{}.p_cmax();
        bool have_other = false;
        if (!o.truth_csv.empty())
        {
            truth = muse::io::to_opportunity_map(muse::io::load_map_csv(o.truth_csv));
            if (!o.other_csv.empty())
            {
                other = muse::io::to_opportunity_map(muse::io::load_map_csv(o.other_csv), muse::MapProvenance::estimated);
                have_other = true;
            }
        }
        else if (!o.scenario.empty())
        {
            const muse::RFSystem sys = load_valid(o.scenario);
            p_cmax = sys.params.p_cmax();
            truth = muse::opportunity_map(sys);
            muse::SensingErrorModel m;
            m.p_missed_detection = o.p_missed;
            m.false_positive_rate = o.fp_rate;
            m.false_positive_power = muse::dbm_to_watts(o.fp_power_dbm);
            m.geolocation_sigma = o.geo_sigma;
            m.power_error_sigma = o.power_sigma_db;
            m.rng_seed = o.seed;
            other = muse::simulate_recovery(sys, m);
            have_other = true;
        }
        else
            throw muse::ValidationError("smf needs --truth or --scenario");

        nlohmann::ordered_json doc{
            {"unit", "W*unit-region"}, {"cells", truth.cell_count()}, {"truth_total", muse::smf_aggregate(truth)}};
        std::vector<std::pair<std::string, muse::SMFReport>> parts;
        if (have_other)
            parts.emplace_back("recovery", muse::compare_maps(truth, other));
        if (o.cap_dbm)
        {
            const std::vector<double> cap(truth.cell_count(), std::min(muse::dbm_to_watts(*o.cap_dbm), p_cmax));
            parts.emplace_back("sharing", muse::apply_policy(truth, cap, p_cmax));
        }
        if (!o.granted_csv.empty())
        {
            const auto granted = muse::io::to_opportunity_map(muse::io::load_map_csv(o.granted_csv));
            if (!granted.same_grid(truth))
                throw muse::ValidationError("granted map grid does not match the truth map");
            parts.emplace_back("exploitation", muse::exploitation_report(truth, granted.values));
        }
        for (const auto &[name, r] : parts)
        {
            const auto j = muse::io::smf_to_json(r);
            doc[name] = j.at(name);
            doc[name]["aggregate"] = r.aggregate;
        }

        Output out(o.out);
        if (o.format == "json")
            out.stream() << doc.dump(2) << '\n';
        else
        {
            auto &s = out.stream();
            const double total = doc["truth_total"].get<double>();
            char buf[160];
            std::snprintf(buf, sizeof buf, "truth total %.6e W*unit-region over %zu cells\n", total, truth.cell_count());
            s << buf;
            for (const auto &[name, _] : parts)
            {
                s << name << '\n';
                for (const auto &[k, v] : doc[name].items())
                {
                    const double x = v.get<double>();
                    std::snprintf(buf, sizeof buf, "  %-22s %.6e  (%.3f%% of truth)\n", k.c_str(), x,
                                  total > 0 ? 100.0 * x / total : 0.0);
                    s << buf;
                }
            }
        }
        out.close();
        return 0;
    }

    int cmd_connectivity(const Options &o)
    {
        const muse::ConsumptionEngine engine(load_valid(o.scenario));
        const auto map = muse::build_connectivity_map(engine, muse::db_to_linear(o.beta_db), o.time);
        Output out(o.out);
        muse::io::write_connectivity_csv(out.stream(), map);
        out.close();
        return 0;
    }

    int cmd_sweep(const Options &o)
    {
        const muse::RFSystem base = load_valid(o.scenario);
        Output out(o.out);
        auto &s = out.stream();
        s << "hex_side_m,regions,total,utilized,forbidden,available,consumed_fraction,available_fraction\n";
        for (double side : parse_list(o.hex_sides))
        {
            muse::RFSystem sys = base;
            sys.grid.hex_side = side;
            if (o.worst_case)
                sys.grid.worst_case_placement = true;
            const auto r = muse::ConsumptionEngine(std::move(sys)).system_report();
            s << muse::io::sci(side) << ',' << r.regions << ',' << muse::io::sci(r.total) << ','
              << muse::io::sci(r.utilized) << ',' << muse::io::sci(r.forbidden) << ',' << muse::io::sci(r.available)
              << ',' << muse::io::sci((r.utilized + r.forbidden) / r.total) << ','
              << muse::io::sci(r.available / r.total) << '\n';
            s.flush();
        }
        out.close();
        return 0;
    }

    void report_error(const char *kind, const std::string &message)
    {
        std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"muse: spectrum consumption modeling"};
    app.require_subcommand(1);
    Options o;

    const std::map<std::string, Units> unit_names{{"dbm", Units::dbm}, {"w", Units::w}, {"both", Units::both}};
    const auto common = [&](CLI::App *c, bool scenario_required = true)
    {
        auto *sc = c->add_option("--scenario", o.scenario, "scenario JSON file");
        if (scenario_required)
            sc->required();
        c->add_option("--out", o.out, "output file (default stdout)");
        c->add_option("--units", o.units, "power units")->transform(CLI::CheckedTransformer(unit_names, CLI::ignore_case));
        c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        c->add_option("--seed", o.seed, "random seed");
    };

    auto *validate = app.add_subcommand("validate", "check a scenario");
    common(validate);

    auto *point = app.add_subcommand("point", "consumption at one point");
    common(point);
    point->add_option("--x", o.x, "x (m)")->required();
    point->add_option("--y", o.y, "y (m)")->required();
    point->add_option("--time", o.time, "time index");
    point->add_option("--band", o.band, "band index");

    auto *map = app.add_subcommand("map", "per-cell map as CSV");
    common(map);
    map->add_option("--heatmap", o.heatmap_prefix, "write gnuplot matrices PREFIX_tT_bB.dat");
    map->add_option("--heatmap-quantity", o.heatmap_quantity)
        ->check(CLI::IsMember({"occupancy", "opportunity", "liability"}));

    auto *report = app.add_subcommand("report", "system totals");
    common(report);
    report->add_flag("--physical-area", o.physical_area, "weight cells by hexagon area (W*m^2)");

    auto *entity = app.add_subcommand("entity", "spectrum consumed by one RF entity");
    common(entity);
    entity->add_option("--id", o.id, "network, link or transceiver id (default: whole system)");

    auto *smf = app.add_subcommand("smf", "score an estimated or policy map against the truth");
    common(smf, false);
    smf->add_option("--truth", o.truth_csv, "truth map CSV");
    smf->add_option("--other", o.other_csv, "estimated map CSV");
    smf->add_option("--granted", o.granted_csv, "granted-power map CSV (opportunity column)");
    smf->add_option("--policy-cap-dbm", o.cap_dbm, "uniform per-cell policy cap");
    smf->add_option("--p-missed", o.p_missed, "missed-detection probability");
    smf->add_option("--fp-rate", o.fp_rate, "false positives per time-band slice");
    smf->add_option("--fp-power-dbm", o.fp_power_dbm, "nominal false-positive power");
    smf->add_option("--geo-sigma", o.geo_sigma, "geolocation error sigma (m)");
    smf->add_option("--power-sigma-db", o.power_sigma_db, "power estimation error sigma (dB)");

    auto *conn = app.add_subcommand("connectivity", "multi-band connectivity edge list");
    common(conn);
    conn->add_option("--beta-db", o.beta_db, "candidate link SINR requirement (dB)");
    conn->add_option("--time", o.time, "time index");

    auto *sweep = app.add_subcommand("sweep", "totals across hexagon sizes");
    common(sweep);
    sweep->add_option("--hex-sides", o.hex_sides, "comma-separated hexagon sides (m)");
    sweep->add_flag("--worst-case", o.worst_case, "move transceivers to worst-case cell vertices");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        report_error("usage", e.what());
        return 2;
    }

    try
    {
        if (*validate)
            return cmd_validate(o);
        if (*point)
            return cmd_point(o);
        if (*map)
            return cmd_map(o);
        if (*report)
            return cmd_report(o);
        if (*entity)
            return cmd_entity(o);
        if (*smf)
            return cmd_smf(o);
        if (*conn)
            return cmd_connectivity(o);
        if (*sweep)
            return cmd_sweep(o);
    }
    catch (const muse::ValidationError &e)
    {
        report_error("validation", e.what());
        return 2;
    }
    catch (const muse::IoError &e)
    {
        report_error("io", e.what());
        return 3;
    }
    catch (const std::exception &e)
    {
        report_error("internal", e.what());
        return 1;
    }
    return 1;
}
