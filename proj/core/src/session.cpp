#include "fairaudit/session.hpp"

#include <mutex>

#include "fairaudit/errors.hpp"

namespace fairaudit {

AuditSession::AuditSession(std::string id, LoadResult loaded, const std::optional<ClusterConfig>& cluster,
                           std::shared_ptr<const MetricRegistry> registry)
    : id_(std::move(id)),
      schema_(std::move(loaded.schema)),
      table_(std::move(loaded.table)),
      matrix_(one_hot(table_, schema_)),
      registry_(std::move(registry)),
      input_rows_(loaded.input_rows),
      dropped_rows_(loaded.dropped_rows) {
    if (!registry_) throw InvalidArgumentError("session needs a metric registry");
    dataset_counts_ = confusion_all(table_);
    std::vector<RowId> all(table_.row_count());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<RowId>(r);
    dataset_distribution_ = distribution_of(all, table_, schema_);
    if (cluster) {
        clustering_ = run_clustering(*cluster, matrix_, table_, schema_, *registry_);
    } else {
        auto none = std::make_shared<Clustering>();
        none->config.k = 0;
        clustering_ = std::move(none);
    }
}

std::shared_ptr<const Clustering> AuditSession::run_clustering(const ClusterConfig& config,
                                                               const OneHotMatrix& matrix, const DataTable& table,
                                                               const FeatureSchema& schema,
                                                               const MetricRegistry& registry) {
    auto result = std::make_shared<Clustering>();
    result->config = config;
    result->model = kmeans(matrix, config);
    for (auto& g : clusters_to_subgroups(result->model, table, schema, registry)) {
        result->groups.push_back(std::make_shared<const Subgroup>(std::move(g)));
    }
    return result;
}

MetricValue AuditSession::dataset_average(std::string_view metric) const {
    return registry_->evaluate(dataset_counts_, metric);
}

GroupRef AuditSession::register_group(Subgroup group) {
    std::unique_lock lock(mutex_);
    if (auto it = user_index_.find(group.id()); it != user_index_.end()) return it->second;
    auto ref = std::make_shared<const Subgroup>(std::move(group));
    user_index_.emplace(ref->id(), ref);
    user_groups_.push_back(ref);
    return ref;
}

std::vector<GroupRef> AuditSession::generate(const FeatureSelection& selection) {
    std::vector<GroupRef> out;
    for (const auto& spec : generate_product(schema_, selection)) {
        out.push_back(register_group(materialize(spec, table_, schema_, *registry_)));
    }
    return out;
}

GroupRef AuditSession::add_predicate(std::vector<Constraint> constraints) {
    auto spec = make_predicate_spec(schema_, std::move(constraints));
    return register_group(materialize(spec, table_, schema_, *registry_));
}

std::shared_ptr<const Clustering> AuditSession::clustering() const {
    std::shared_lock lock(mutex_);
    return clustering_;
}

void AuditSession::recluster(const ClusterConfig& config) {
    auto next = run_clustering(config, matrix_, table_, schema_, *registry_);
    std::unique_lock lock(mutex_);
    clustering_ = std::move(next);
}

GroupRef AuditSession::find(std::string_view id) const {
    std::shared_lock lock(mutex_);
    if (auto it = user_index_.find(std::string(id)); it != user_index_.end()) return it->second;
    for (const auto& g : clustering_->groups) {
        if (g->id() == id) return g;
    }
    throw NotFoundError("unknown group '" + std::string(id) + "'");
}

std::vector<GroupRef> AuditSession::user_groups() const {
    std::shared_lock lock(mutex_);
    return user_groups_;
}

std::vector<GroupRef> AuditSession::universe() const {
    std::shared_lock lock(mutex_);
    std::vector<GroupRef> out = user_groups_;
    for (const auto& g : clustering_->groups) {
        if (!user_index_.count(g->id())) out.push_back(g);
    }
    return out;
}

std::vector<GroupRef> AuditSession::suggestions(std::string_view metric, std::size_t min_size,
                                                std::size_t limit, SortOrder order) const {
    auto ranked = rank_suggestions(clustering()->groups, metric, min_size, *registry_, order);
    if (ranked.size() > limit) ranked.resize(limit);
    return ranked;
}

std::vector<SimilarityResult> AuditSession::similar(std::string_view id, const SimilarQuery& query) const {
    (void)find(id);
    return find_similar(id, universe(), query, schema_, *registry_);
}

std::vector<CounterfactualNeighbor> AuditSession::counterfactual(std::string_view id, int radius,
                                                                 std::string_view metric) const {
    return counterfactual_neighbors(*find(id), radius, metric, table_, schema_, *registry_);
}

void AuditSession::set_pinned(std::optional<std::string> id) {
    if (id) (void)find(*id);
    std::unique_lock lock(mutex_);
    pinned_ = std::move(id);
}

void AuditSession::set_hovered(std::optional<std::string> id) {
    if (id) (void)find(*id);
    std::unique_lock lock(mutex_);
    hovered_ = std::move(id);
}

std::optional<std::string> AuditSession::pinned() const {
    std::shared_lock lock(mutex_);
    return pinned_;
}

std::optional<std::string> AuditSession::hovered() const {
    std::shared_lock lock(mutex_);
    return hovered_;
}

}  // namespace fairaudit
