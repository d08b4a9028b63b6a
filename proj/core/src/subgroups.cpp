#include "fairaudit/subgroups.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "fairaudit/csv.hpp"
#include "fairaudit/errors.hpp"

namespace fairaudit {

namespace {

class Fnv1a {
public:
    void add(std::string_view bytes) {
        for (unsigned char c : bytes) {
            hash_ ^= c;
            hash_ *= 0x100000001b3ULL;
        }
    }
    void add_separator(char c) { add(std::string_view(&c, 1)); }
    std::string hex() const {
        std::array<char, 17> buf{};
        std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(hash_));
        return std::string(buf.data(), 16);
    }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string_view to_string(GroupKind kind) {
    return kind == GroupKind::predicate ? "predicate" : "cluster";
}

std::optional<ValueCode> SubgroupSpec::constrained_value(std::size_t feature) const {
    for (const auto& c : constraints) {
        if (c.feature == feature) return c.value;
    }
    return std::nullopt;
}

SubgroupSpec make_predicate_spec(const FeatureSchema& schema, std::vector<Constraint> constraints) {
    std::sort(constraints.begin(), constraints.end());
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& c = constraints[i];
        if (c.feature >= schema.feature_count()) throw SchemaError("constraint on unknown feature index");
        const auto& f = schema.feature(c.feature);
        if (c.value >= f.values.size()) throw SchemaError("illegal value code for feature '" + f.name + "'");
        if (i > 0 && constraints[i - 1].feature == c.feature) {
            throw InvalidArgumentError("feature '" + f.name + "' is constrained twice");
        }
    }

    SubgroupSpec spec;
    spec.kind = GroupKind::predicate;
    Fnv1a hash;
    hash.add("predicate");
    for (const auto& c : constraints) {
        const auto& f = schema.feature(c.feature);
        hash.add_separator('\x1e');
        hash.add(f.name);
        hash.add_separator('\x1f');
        hash.add(f.values[c.value]);
        if (!spec.display_name.empty()) spec.display_name += ", ";
        spec.display_name += f.name + "=" + f.values[c.value];
    }
    if (spec.display_name.empty()) spec.display_name = "all instances";
    spec.id = "p" + hash.hex();
    spec.constraints = std::move(constraints);
    return spec;
}

SubgroupSpec make_cluster_spec(std::vector<RowId> members, std::string display_name) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Fnv1a hash;
    hash.add("cluster");
    for (RowId r : members) {
        hash.add_separator(',');
        hash.add(std::to_string(r));
    }
    SubgroupSpec spec;
    spec.kind = GroupKind::cluster;
    spec.member_ids = std::move(members);
    spec.id = "c" + hash.hex();
    spec.display_name = std::move(display_name);
    return spec;
}

std::vector<Constraint> parse_constraints(const FeatureSchema& schema, std::string_view text) {
    std::vector<Constraint> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string item = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) {
            if (comma == text.size()) break;
            throw InvalidArgumentError("empty constraint in '" + std::string(text) + "'");
        }
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgumentError("constraint '" + item + "' is not of the form feature=value");
        }
        const std::size_t f = schema.require_feature(trim(item.substr(0, eq)));
        out.push_back({f, schema.require_value(f, trim(item.substr(eq + 1)))});
    }
    if (out.empty()) throw InvalidArgumentError("no constraints given");
    return out;
}

std::vector<double> FeatureDistribution::normalized(std::size_t feature) const {
    const auto& c = counts.at(feature);
    std::vector<double> p(c.size(), 0.0);
    if (group_size == 0) return p;
    for (std::size_t v = 0; v < c.size(); ++v) {
        p[v] = static_cast<double>(c[v]) / static_cast<double>(group_size);
    }
    return p;
}

FeatureDistribution distribution_of(std::span<const RowId> members, const DataTable& table,
                                    const FeatureSchema& schema) {
    FeatureDistribution d;
    d.group_size = members.size();
    d.counts.resize(schema.feature_count());
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
        auto& counts = d.counts[f];
        counts.assign(schema.feature(f).values.size(), 0);
        const auto column = table.column(f);
        for (RowId r : members) ++counts[column[r]];
    }
    return d;
}

FeatureSelection make_selection(const FeatureSchema& schema,
                                std::span<const std::pair<std::string, std::vector<std::string>>> by_name) {
    FeatureSelection selection;
    for (const auto& [name, values] : by_name) {
        const std::size_t f = schema.require_feature(name);
        for (const auto& existing : selection.features) {
            if (existing.first == f) throw InvalidArgumentError("feature '" + name + "' selected twice");
        }
        std::vector<ValueCode> codes;
        if (values.empty()) {
            for (std::size_t v = 0; v < schema.feature(f).values.size(); ++v) codes.push_back(static_cast<ValueCode>(v));
        } else {
            for (const auto& v : values) {
                ValueCode code = schema.require_value(f, v);
                if (std::find(codes.begin(), codes.end(), code) == codes.end()) codes.push_back(code);
            }
        }
        selection.features.emplace_back(f, std::move(codes));
    }
    return selection;
}

std::vector<SubgroupSpec> generate_product(const FeatureSchema& schema, const FeatureSelection& selection) {
    if (selection.features.empty()) throw InvalidArgumentError("empty selection: choose at least one feature");
    for (const auto& [f, values] : selection.features) {
        if (f >= schema.feature_count()) throw SchemaError("selection names an unknown feature index");
        if (values.empty()) {
            throw InvalidArgumentError("feature '" + schema.feature(f).name + "' selected with no values");
        }
    }

    std::vector<SubgroupSpec> out;
    std::vector<std::size_t> odometer(selection.features.size(), 0);
    for (;;) {
        std::vector<Constraint> constraints;
        constraints.reserve(odometer.size());
        for (std::size_t i = 0; i < odometer.size(); ++i) {
            constraints.push_back({selection.features[i].first, selection.features[i].second[odometer[i]]});
        }
        out.push_back(make_predicate_spec(schema, std::move(constraints)));

        std::size_t i = odometer.size();
        while (i > 0) {
            --i;
            if (++odometer[i] < selection.features[i].second.size()) break;
            odometer[i] = 0;
            if (i == 0) return out;
        }
    }
}

std::vector<RowId> members_of(const SubgroupSpec& spec, const DataTable& table) {
    if (spec.kind == GroupKind::cluster) {
        for (RowId r : spec.member_ids) {
            if (r >= table.row_count()) throw InvalidArgumentError("cluster member id out of range");
        }
        return spec.member_ids;
    }
    std::vector<std::span<const ValueCode>> columns;
    for (const auto& c : spec.constraints) columns.push_back(table.column(c.feature));
    std::vector<RowId> members;
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        bool match = true;
        for (std::size_t i = 0; i < columns.size() && match; ++i) match = columns[i][r] == spec.constraints[i].value;
        if (match) members.push_back(static_cast<RowId>(r));
    }
    return members;
}

Subgroup materialize(const SubgroupSpec& spec, const DataTable& table, const FeatureSchema& schema,
                     const MetricRegistry& registry) {
    Subgroup g;
    g.spec = spec;
    g.members = members_of(spec, table);
    g.counts = confusion(g.members, table);
    g.metrics = registry.evaluate_all(g.counts);
    g.distribution = distribution_of(g.members, table, schema);
    g.label_balance = label_balance(g.members, table);
    return g;
}

std::vector<GroupRef> filter_by_size(std::span<const GroupRef> groups, std::size_t min_size) {
    std::vector<GroupRef> out;
    for (const auto& g : groups) {
        if (g->size() >= min_size) out.push_back(g);
    }
    return out;
}

}  // namespace fairaudit
