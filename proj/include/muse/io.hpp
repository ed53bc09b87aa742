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

#ifndef MUSE_IO_HPP
#define MUSE_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "connectivity.hpp"
#include "consumption.hpp"
#include "error.hpp"
#include "scenario.hpp"
#include "smf.hpp"
#include "units.hpp"

namespace muse::io
{
    using nlohmann::json;
    using nlohmann::ordered_json;

    inline constexpr int scenario_schema_version = 1;

    // How powers, ratios and angles are written back out. `decibel` is the human form;
    // `linear` writes the internal values and round-trips bit for bit.
    enum class ScenarioStyle
    {
        decibel,
        linear
    };

    namespace detail
    {
        inline void check_keys(const json &o, std::initializer_list<std::string_view> allowed, std::string_view where)
        {
            if (!o.is_object())
                throw ValidationError(std::string(where) + " must be an object");
            for (const auto &item : o.items())
            {
                bool known = false;
                for (auto k : allowed)
                    known = known || item.key() == k;
                if (!known)
                    throw ValidationError("unknown key '" + item.key() + "' in " + std::string(where));
            }
        }

        inline double number(const json &o, const char *key, std::string_view where, std::optional<double> fallback = {})
        {
            if (!o.contains(key))
            {
                if (fallback)
                    return *fallback;
                throw ValidationError("missing key '" + std::string(key) + "' in " + std::string(where));
            }
            const json &v = o.at(key);
            if (!v.is_number())
                throw ValidationError("'" + std::string(key) + "' in " + std::string(where) + " must be a number");
            return v.get<double>();
        }

        // A quantity accepted either in log form (db_key) or linear form (linear_key), never both.
        inline std::optional<double> dual(const json &o, const char *db_key, const char *linear_key,
                                          double (*from_db)(double), std::string_view where)
        {
            const bool has_db = o.contains(db_key);
            const bool has_lin = o.contains(linear_key);
            if (has_db && has_lin)
                throw ValidationError("give only one of '" + std::string(db_key) + "' and '" + std::string(linear_key) +
                                      "' in " + std::string(where));
            if (has_db)
                return from_db(number(o, db_key, where));
            if (has_lin)
                return number(o, linear_key, where);
            return std::nullopt;
        }

        inline double required_dual(const json &o, const char *db_key, const char *linear_key, double (*from_db)(double),
                                    std::string_view where)
        {
            auto v = dual(o, db_key, linear_key, from_db, where);
            if (!v)
                throw ValidationError("missing '" + std::string(db_key) + "' in " + std::string(where));
            return *v;
        }

        inline double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
        inline double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

        inline std::string text(const json &o, const char *key, std::string_view where)
        {
            if (!o.contains(key) || !o.at(key).is_string())
                throw ValidationError("'" + std::string(key) + "' in " + std::string(where) + " must be a string");
            return o.at(key).get<std::string>();
        }

        inline Point point(const json &o, const char *key, std::string_view where)
        {
            if (!o.contains(key) || !o.at(key).is_array() || o.at(key).size() != 2 || !o.at(key)[0].is_number() ||
                !o.at(key)[1].is_number())
                throw ValidationError("'" + std::string(key) + "' in " + std::string(where) + " must be [x, y]");
            return {o.at(key)[0].get<double>(), o.at(key)[1].get<double>()};
        }

        inline std::vector<std::size_t> indices(const json &o, const char *key, std::string_view where)
        {
            std::vector<std::size_t> out;
            if (!o.contains(key))
                return out;
            if (!o.at(key).is_array())
                throw ValidationError("'" + std::string(key) + "' in " + std::string(where) + " must be an array");
            for (const auto &v : o.at(key))
            {
                if (!v.is_number_unsigned())
                    throw ValidationError("'" + std::string(key) + "' in " + std::string(where) +
                                          " must hold non-negative integers");
                out.push_back(v.get<std::size_t>());
            }
            return out;
        }

        inline AntennaPattern antenna(const json &o, std::string_view where)
        {
            if (o.is_null())
                return AntennaPattern::omni();
            const std::string w = std::string(where) + " antenna";
            check_keys(o, {"kind", "boresight_deg", "boresight_rad", "beamwidth_deg", "beamwidth_rad", "main_gain_dbi",
                           "main_gain", "back_gain_dbi", "back_gain"},
                       w);
            const std::string kind = text(o, "kind", w);
            if (kind == "omni")
                return AntennaPattern::omni();
            if (kind != "sector")
                throw ValidationError("unknown antenna kind '" + kind + "'");
            AntennaPattern a;
            a.kind = AntennaKind::sector;
            a.boresight = required_dual(o, "boresight_deg", "boresight_rad", deg_to_rad, w);
            a.beamwidth = required_dual(o, "beamwidth_deg", "beamwidth_rad", deg_to_rad, w);
            a.main_gain = required_dual(o, "main_gain_dbi", "main_gain", db_to_linear, w);
            a.back_gain = required_dual(o, "back_gain_dbi", "back_gain", db_to_linear, w);
            return a;
        }

        inline Activity activity(const json &o, std::string_view where)
        {
            return {indices(o, "active_intervals", where), indices(o, "bands", where)};
        }

        inline json antenna_json(const AntennaPattern &a, ScenarioStyle style)
        {
            if (a.kind == AntennaKind::omni)
                return {{"kind", "omni"}};
            json o{{"kind", "sector"}};
            if (style == ScenarioStyle::decibel)
            {
                o["boresight_deg"] = rad_to_deg(a.boresight);
                o["beamwidth_deg"] = rad_to_deg(a.beamwidth);
                o["main_gain_dbi"] = linear_to_db(a.main_gain);
                o["back_gain_dbi"] = linear_to_db(a.back_gain);
            }
            else
            {
                o["boresight_rad"] = a.boresight;
                o["beamwidth_rad"] = a.beamwidth;
                o["main_gain"] = a.main_gain;
                o["back_gain"] = a.back_gain;
            }
            return o;
        }

        inline void put_activity(json &o, const Activity &a)
        {
            if (!a.intervals.empty())
                o["active_intervals"] = a.intervals;
            if (!a.bands.empty())
                o["bands"] = a.bands;
        }
    } // namespace detail

    inline RFSystem parse_scenario(const json &doc)
    {
        using namespace detail;
        try
        {
            check_keys(doc, {"schema_version", "system", "propagation", "grid", "networks"}, "scenario");
            if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer() ||
                doc.at("schema_version").get<int>() != scenario_schema_version)
                throw ValidationError("unsupported schema_version (expected " +
                                      std::to_string(scenario_schema_version) + ")");

            RFSystem sys;
            const json &s = doc.at("system");
            check_keys(s, {"p_max_dbm", "p_max_w", "p_min_dbm", "p_min_w", "noise_dbm", "noise_w", "noise_overrides"},
                       "system");
            sys.params.p_max = required_dual(s, "p_max_dbm", "p_max_w", dbm_to_watts, "system");
            sys.params.p_min = required_dual(s, "p_min_dbm", "p_min_w", dbm_to_watts, "system");
            sys.params.ambient_noise = required_dual(s, "noise_dbm", "noise_w", dbm_to_watts, "system");
            if (s.contains("noise_overrides"))
            {
                for (const auto &ov : s.at("noise_overrides"))
                {
                    check_keys(ov, {"region", "noise_dbm", "noise_w"}, "noise override");
                    if (!ov.contains("region") || !ov.at("region").is_number_unsigned())
                        throw ValidationError("noise override needs a non-negative integer 'region'");
                    sys.params.noise_overrides[ov.at("region").get<std::size_t>()] =
                        required_dual(ov, "noise_dbm", "noise_w", dbm_to_watts, "noise override");
                }
            }

            if (doc.contains("propagation"))
            {
                const json &p = doc.at("propagation");
                check_keys(p, {"kind", "alpha", "reference_distance_m"}, "propagation");
                if (p.contains("kind") && text(p, "kind", "propagation") != "power-law")
                    throw ValidationError("unknown propagation kind '" + text(p, "kind", "propagation") + "'");
                sys.propagation.alpha = number(p, "alpha", "propagation", 3.5);
                sys.propagation.reference_distance = number(p, "reference_distance_m", "propagation", 1.0);
            }

            const json &g = doc.at("grid");
            check_keys(g, {"width_m", "height_m", "hex_side_m", "time_quanta", "time_quantum_s", "bands",
                           "sample_point_policy", "sample_offset_m", "worst_case_placement"},
                       "grid");
            sys.grid.region_width = number(g, "width_m", "grid");
            sys.grid.region_height = number(g, "height_m", "grid");
            sys.grid.hex_side = number(g, "hex_side_m", "grid");
            sys.grid.time_quantum = number(g, "time_quantum_s", "grid", 1.0);
            if (g.contains("time_quanta"))
            {
                if (!g.at("time_quanta").is_number_unsigned())
                    throw ValidationError("'time_quanta' must be a positive integer");
                sys.grid.horizon = g.at("time_quanta").get<std::size_t>();
            }
            if (g.contains("bands"))
            {
                sys.grid.bands.clear();
                for (const auto &b : g.at("bands"))
                {
                    check_keys(b, {"center_hz", "bandwidth_hz", "alpha"}, "band");
                    BandSpec band;
                    band.center_hz = number(b, "center_hz", "band", 0.0);
                    band.bandwidth_hz = number(b, "bandwidth_hz", "band", 6e6);
                    if (b.contains("alpha"))
                        band.alpha = number(b, "alpha", "band");
                    sys.grid.bands.push_back(band);
                }
            }
            if (g.contains("sample_point_policy"))
            {
                const std::string policy = text(g, "sample_point_policy", "grid");
                if (policy == "centroid")
                    sys.grid.sample_point_policy = SamplePointPolicy::centroid;
                else if (policy == "explicit-offset")
                    sys.grid.sample_point_policy = SamplePointPolicy::explicit_offset;
                else
                    throw ValidationError("unknown sample_point_policy '" + policy + "'");
            }
            if (g.contains("sample_offset_m"))
                sys.grid.sample_offset = point(g, "sample_offset_m", "grid");
            if (g.contains("worst_case_placement"))
            {
                if (!g.at("worst_case_placement").is_boolean())
                    throw ValidationError("'worst_case_placement' must be a boolean");
                sys.grid.worst_case_placement = g.at("worst_case_placement").get<bool>();
            }

            if (doc.contains("networks"))
            {
                for (const auto &n : doc.at("networks"))
                {
                    check_keys(n, {"id", "orthogonal", "links"}, "network");
                    RFNetwork net;
                    net.id = text(n, "id", "network");
                    const std::string nw = "network " + net.id;
                    if (n.contains("orthogonal"))
                        net.orthogonal = n.at("orthogonal").get<bool>();
                    if (n.contains("links"))
                        for (const auto &l : n.at("links"))
                        {
                            check_keys(l, {"id", "transmitters", "receivers"}, nw + " link");
                            RFLink link;
                            link.id = text(l, "id", nw + " link");
                            const std::string lw = "link " + link.id;
                            if (l.contains("transmitters"))
                                for (const auto &t : l.at("transmitters"))
                                {
                                    check_keys(t, {"id", "position_m", "power_dbm", "power_w", "antenna",
                                                   "active_intervals", "bands"},
                                               lw + " transmitter");
                                    Transmitter tx;
                                    tx.id = text(t, "id", lw + " transmitter");
                                    const std::string tw = "transmitter " + tx.id;
                                    tx.position = point(t, "position_m", tw);
                                    tx.tx_power = required_dual(t, "power_dbm", "power_w", dbm_to_watts, tw);
                                    tx.antenna = antenna(t.value("antenna", json()), tw);
                                    tx.activity = activity(t, tw);
                                    link.transmitters.push_back(std::move(tx));
                                }
                            if (l.contains("receivers"))
                                for (const auto &r : l.at("receivers"))
                                {
                                    check_keys(r, {"id", "position_m", "beta_db", "beta", "antenna", "serving_link",
                                                   "interference_margin_dbm", "interference_margin_w",
                                                   "active_intervals", "bands"},
                                               lw + " receiver");
                                    Receiver rx;
                                    rx.id = text(r, "id", lw + " receiver");
                                    const std::string rw = "receiver " + rx.id;
                                    rx.position = point(r, "position_m", rw);
                                    rx.beta = required_dual(r, "beta_db", "beta", db_to_linear, rw);
                                    rx.antenna = antenna(r.value("antenna", json()), rw);
                                    if (r.contains("serving_link"))
                                        rx.serving_link = text(r, "serving_link", rw);
                                    rx.interference_margin = dual(r, "interference_margin_dbm", "interference_margin_w",
                                                                  dbm_to_watts, rw);
                                    rx.activity = activity(r, rw);
                                    link.receivers.push_back(std::move(rx));
                                }
                            net.links.push_back(std::move(link));
                        }
                    sys.networks.push_back(std::move(net));
                }
            }
            return sys;
        }
        catch (const json::exception &e)
        {
            throw ValidationError(std::string("malformed scenario: ") + e.what());
        }
    }

    inline RFSystem parse_scenario_text(std::string_view text)
    {
        json doc;
        try
        {
            doc = json::parse(text.begin(), text.end());
        }
        catch (const json::parse_error &e)
        {
            throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
        }
        return parse_scenario(doc);
    }

    inline std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad())
            throw IoError("cannot read " + path.string());
        return ss.str();
    }

    inline RFSystem load_scenario(const std::filesystem::path &path) { return parse_scenario_text(read_file(path)); }

    inline json scenario_to_json(const RFSystem &sys, ScenarioStyle style = ScenarioStyle::decibel)
    {
        const bool db = style == ScenarioStyle::decibel;
        const auto power = [db](json &o, const char *base, double watts)
        { o[std::string(base) + (db ? "_dbm" : "_w")] = db ? watts_to_dbm(watts) : watts; };

        json doc;
        doc["schema_version"] = scenario_schema_version;
        json s = json::object();
        power(s, "p_max", sys.params.p_max);
        power(s, "p_min", sys.params.p_min);
        power(s, "noise", sys.params.ambient_noise);
        if (!sys.params.noise_overrides.empty())
        {
            json ov = json::array();
            for (const auto &[region, w] : sys.params.noise_overrides)
            {
                json o{{"region", region}};
                power(o, "noise", w);
                ov.push_back(o);
            }
            s["noise_overrides"] = ov;
        }
        doc["system"] = s;
        doc["propagation"] = {{"kind", "power-law"},
                              {"alpha", sys.propagation.alpha},
                              {"reference_distance_m", sys.propagation.reference_distance}};

        json g{{"width_m", sys.grid.region_width},
               {"height_m", sys.grid.region_height},
               {"hex_side_m", sys.grid.hex_side},
               {"time_quanta", sys.grid.horizon},
               {"time_quantum_s", sys.grid.time_quantum},
               {"worst_case_placement", sys.grid.worst_case_placement}};
        json bands = json::array();
        for (const auto &b : sys.grid.bands)
        {
            json o{{"center_hz", b.center_hz}, {"bandwidth_hz", b.bandwidth_hz}};
            if (b.alpha)
                o["alpha"] = *b.alpha;
            bands.push_back(o);
        }
        g["bands"] = bands;
        if (sys.grid.sample_point_policy == SamplePointPolicy::explicit_offset)
        {
            g["sample_point_policy"] = "explicit-offset";
            g["sample_offset_m"] = {sys.grid.sample_offset.x, sys.grid.sample_offset.y};
        }
        else
            g["sample_point_policy"] = "centroid";
        doc["grid"] = g;

        json nets = json::array();
        for (const auto &n : sys.networks)
        {
            json links = json::array();
            for (const auto &l : n.links)
            {
                json txs = json::array();
                for (const auto &t : l.transmitters)
                {
                    json o{{"id", t.id}, {"position_m", {t.position.x, t.position.y}}};
                    power(o, "power", t.tx_power);
                    o["antenna"] = detail::antenna_json(t.antenna, style);
                    detail::put_activity(o, t.activity);
                    txs.push_back(o);
                }
                json rxs = json::array();
                for (const auto &r : l.receivers)
                {
                    json o{{"id", r.id}, {"position_m", {r.position.x, r.position.y}}};
                    if (db)
                        o["beta_db"] = linear_to_db(r.beta);
                    else
                        o["beta"] = r.beta;
                    o["antenna"] = detail::antenna_json(r.antenna, style);
                    if (r.serving_link)
                        o["serving_link"] = *r.serving_link;
                    if (r.interference_margin)
                        power(o, "interference_margin", *r.interference_margin);
                    detail::put_activity(o, r.activity);
                    rxs.push_back(o);
                }
                links.push_back({{"id", l.id}, {"transmitters", txs}, {"receivers", rxs}});
            }
            nets.push_back({{"id", n.id}, {"orthogonal", n.orthogonal}, {"links", links}});
        }
        doc["networks"] = nets;
        return doc;
    }

    inline std::string serialize_scenario(const RFSystem &sys, ScenarioStyle style = ScenarioStyle::decibel)
    {
        return scenario_to_json(sys, style).dump(2) + "\n";
    }

    // ------------------------------------------------------------------------
    // CSV

    inline constexpr std::string_view map_csv_header =
        "region_index,time_index,band_index,centroid_x_m,centroid_y_m,occupancy_w,opportunity_w,raw_opportunity_w,"
        "liability_w";

    /// Shortest form that still round-trips: 17 significant digits, scientific.
    inline std::string sci(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.16e", v);
        return buf;
    }

    inline void write_map_csv(std::ostream &out, const std::vector<CellSummary> &cells)
    {
        out << map_csv_header << '\n';
        for (const auto &c : cells)
            out << c.region_index << ',' << c.time_index << ',' << c.band_index << ',' << sci(c.sample_point.x) << ','
                << sci(c.sample_point.y) << ',' << sci(c.occupancy) << ',' << sci(c.opportunity) << ','
                << sci(c.raw_opportunity) << ',' << sci(c.liability) << '\n';
    }

    namespace detail
    {
        inline std::vector<std::string> split(const std::string &line)
        {
            std::vector<std::string> out;
            std::string field;
            std::istringstream ss(line);
            while (std::getline(ss, field, ','))
                out.push_back(field);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        inline double parse_double(const std::string &s, std::size_t line)
        {
            try
            {
                std::size_t used = 0;
                const double v = std::stod(s, &used);
                if (used != s.size())
                    throw std::invalid_argument(s);
                return v;
            }
            catch (const std::exception &)
            {
                throw ValidationError("map CSV line " + std::to_string(line) + ": bad number '" + s + "'");
            }
        }

        inline std::size_t parse_index(const std::string &s, std::size_t line)
        {
            const double v = parse_double(s, line);
            if (v < 0.0 || v != std::floor(v))
                throw ValidationError("map CSV line " + std::to_string(line) + ": bad index '" + s + "'");
            return static_cast<std::size_t>(v);
        }
    } // namespace detail

    /// Reads a map CSV and checks that it lists a complete grid in region, time, band order.
    inline std::vector<CellSummary> read_map_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw ValidationError("map CSV is empty");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != map_csv_header)
            throw ValidationError("map CSV header mismatch");
        std::vector<CellSummary> cells;
        std::size_t n = 1;
        while (std::getline(in, line))
        {
            ++n;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty())
                continue;
            const auto f = detail::split(line);
            if (f.size() != 9)
                throw ValidationError("map CSV line " + std::to_string(n) + ": expected 9 fields");
            CellSummary c;
            c.region_index = detail::parse_index(f[0], n);
            c.time_index = detail::parse_index(f[1], n);
            c.band_index = detail::parse_index(f[2], n);
            c.sample_point = {detail::parse_double(f[3], n), detail::parse_double(f[4], n)};
            c.occupancy = detail::parse_double(f[5], n);
            c.opportunity = detail::parse_double(f[6], n);
            c.raw_opportunity = detail::parse_double(f[7], n);
            c.liability = detail::parse_double(f[8], n);
            cells.push_back(c);
        }
        return cells;
    }

    inline std::vector<CellSummary> load_map_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open " + path.string());
        return read_map_csv(in);
    }

    /// Opportunity column of a complete map as an OpportunityMap.
    inline OpportunityMap to_opportunity_map(const std::vector<CellSummary> &cells,
                                             MapProvenance provenance = MapProvenance::ground_truth)
    {
        OpportunityMap m;
        m.provenance = provenance;
        if (cells.empty())
            throw ValidationError("map has no cells");
        std::size_t R = 0, T = 0, B = 0;
        for (const auto &c : cells)
        {
            R = std::max(R, c.region_index + 1);
            T = std::max(T, c.time_index + 1);
            B = std::max(B, c.band_index + 1);
        }
        if (R * T * B != cells.size())
            throw ValidationError("map row count does not match its grid");
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            const auto &c = cells[i];
            if ((c.region_index * T + c.time_index) * B + c.band_index != i)
                throw ValidationError("map rows are not in region, time, band order");
            m.values.push_back(c.opportunity);
        }
        m.regions = R;
        m.time_quanta = T;
        m.bands = B;
        return m;
    }

    enum class MapQuantity
    {
        occupancy,
        opportunity,
        liability
    };

    /// gnuplot matrix (one line per lattice row, one column per lattice column) for one slice.
    inline void write_heatmap(std::ostream &out, const std::vector<CellSummary> &cells, const HexLattice &lattice,
                              std::size_t horizon, std::size_t bands, std::size_t time, std::size_t band,
                              MapQuantity quantity)
    {
        for (std::size_t row = 0; row < lattice.rows(); ++row)
        {
            for (std::size_t col = 0; col < lattice.columns(); ++col)
            {
                const std::size_t region = row * lattice.columns() + col;
                const CellSummary &c = cells.at((region * horizon + time) * bands + band);
                const double v = quantity == MapQuantity::occupancy     ? c.occupancy
                                 : quantity == MapQuantity::opportunity ? c.opportunity
                                                                        : c.liability;
                out << (col ? " " : "") << sci(v);
            }
            out << '\n';
        }
    }

    inline constexpr std::string_view connectivity_csv_header =
        "cell_a,cell_b,band,feasible,max_power_dbm,sinr_db,best_band";

    inline void write_connectivity_csv(std::ostream &out, const ConnectivityMap &map)
    {
        out << connectivity_csv_header << '\n';
        for (std::size_t i = 0; i < map.edges.size(); ++i)
        {
            const auto &e = map.edges[i];
            const auto &best = map.best_band[i / map.bands];
            out << e.from << ',' << e.to << ',' << e.band << ',' << (e.link.feasible ? 1 : 0) << ','
                << sci(watts_to_dbm(e.link.max_power)) << ',' << sci(linear_to_db(e.link.sinr)) << ',';
            if (best)
                out << *best;
            out << '\n';
        }
    }

    // ------------------------------------------------------------------------
    // Reports

    inline ordered_json report_to_json(const ConsumptionReport &r, bool physical_area = false)
    {
        const double scale = physical_area ? hex_area(r.hex_side) : 1.0;
        ordered_json o;
        o["unit"] = physical_area ? "W*m^2" : "W*unit-region";
        o["grid"] = {{"regions", r.regions}, {"time_quanta", r.time_quanta}, {"bands", r.bands}, {"hex_side_m", r.hex_side}};
        o["total"] = r.total * scale;
        o["utilized"] = r.utilized * scale;
        o["forbidden"] = r.forbidden * scale;
        o["available"] = r.available * scale;
        o["utilized_fraction"] = r.utilized / r.total;
        o["forbidden_fraction"] = r.forbidden / r.total;
        o["available_fraction"] = r.available / r.total;
        o["conservation_residual"] = r.conservation_residual;
        ordered_json tx = ordered_json::array();
        for (const auto &t : r.transmitters)
            tx.push_back({{"id", t.id}, {"consumed", t.value * scale}});
        ordered_json rx = ordered_json::array();
        for (const auto &x : r.receivers)
            rx.push_back({{"id", x.id}, {"consumed", x.value * scale}});
        o["transmitters"] = tx;
        o["receivers"] = rx;
        ordered_json harm = ordered_json::array();
        for (const auto &h : r.harmful)
            harm.push_back({{"receiver", h.receiver}, {"time_index", h.time_index}, {"band_index", h.band_index}});
        o["harmful_interference"] = harm;
        return o;
    }

    inline void write_report_text(std::ostream &out, const ConsumptionReport &r, bool physical_area = false)
    {
        const double scale = physical_area ? hex_area(r.hex_side) : 1.0;
        const char *unit = physical_area ? "W*m^2" : "W*unit-region";
        const auto line = [&](const char *name, double v)
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%-12s %.6e %s  (%.3f%%)\n", name, v * scale, unit, 100.0 * v / r.total);
            out << buf;
        };
        out << "grid: " << r.regions << " regions x " << r.time_quanta << " time quanta x " << r.bands << " bands\n";
        line("total", r.total);
        line("utilized", r.utilized);
        line("forbidden", r.forbidden);
        line("available", r.available);
        char buf[96];
        std::snprintf(buf, sizeof buf, "conservation residual %.3e\n", r.conservation_residual);
        out << buf;
        for (const auto &t : r.transmitters)
        {
            std::snprintf(buf, sizeof buf, "  %.6e %s", t.value * scale, unit);
            out << "transmitter " << t.id << buf << '\n';
        }
        for (const auto &x : r.receivers)
        {
            std::snprintf(buf, sizeof buf, "  %.6e %s", x.value * scale, unit);
            out << "receiver " << x.id << buf << '\n';
        }
        for (const auto &h : r.harmful)
            out << "harmful interference: " << h.receiver << " (time " << h.time_index << ", band " << h.band_index
                << ")\n";
    }

    inline ordered_json smf_to_json(const SMFReport &r)
    {
        ordered_json o;
        o["unit"] = "W*unit-region";
        o["aggregate"] = r.aggregate;
        o["truth_total"] = r.truth_total;
        if (r.sharing)
            o["sharing"] = {{"implied_available", r.sharing->implied_available},
                            {"implied_guard", r.sharing->implied_guard},
                            {"implied_incursed", r.sharing->implied_incursed}};
        if (r.recovery)
            o["recovery"] = {{"recovered_available", r.recovery->recovered_available},
                             {"lost_available", r.recovery->lost_available},
                             {"potentially_incursed", r.recovery->potentially_incursed}};
        if (r.exploitation)
            o["exploitation"] = {{"exploited_available", r.exploitation->exploited_available},
                                 {"unexploited_available", r.exploitation->unexploited_available},
                                 {"incursed", r.exploitation->incursed}};
        return o;
    }

} // namespace muse::io

#endif
