#ifndef GLDUAL_SURVEY_CACHE_HPP
#define GLDUAL_SURVEY_CACHE_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace gldual {

/*
 * JSON-lines file of {"key": ..., "report": {...}} records.  Reads take a
 * shared flock and appends an exclusive one, so several processes may share
 * a file.  When a key occurs twice the first record wins.
 */
class survey_cache
{
    public:
    explicit survey_cache(std::string path);

    std::string const & path() const { return path_; }
    /* Re-reads the file. */
    void load();
    std::optional<nlohmann::json> lookup(std::string const & key) const;
    /* Appends the records not yet present, in order, under one lock. */
    void store(std::vector<std::pair<std::string, nlohmann::json>> const & records);
    std::size_t size() const;

    private:
    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::string, nlohmann::json> entries_;
};

} // namespace gldual

#endif /* GLDUAL_SURVEY_CACHE_HPP */
