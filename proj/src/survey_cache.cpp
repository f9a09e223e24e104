#include "gldual/survey_cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gldual/errors.hpp"

namespace gldual {

namespace {

class locked_fd
{
    public:
    locked_fd(std::string const & path, int flags, int lock)
    {
        fd = ::open(path.c_str(), flags, 0644);
        if (fd < 0)
            return;
        while (::flock(fd, lock) != 0)
            if (errno != EINTR)
                throw input_error("cache: cannot lock " + path + ": " + std::strerror(errno));
    }
    ~locked_fd()
    {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
    locked_fd(locked_fd const &) = delete;
    locked_fd & operator=(locked_fd const &) = delete;

    int fd = -1;
};

std::string read_all(int fd)
{
    std::string out;
    char buf[1 << 14];
    ::lseek(fd, 0, SEEK_SET);
    while (true) {
        ssize_t k = ::read(fd, buf, sizeof buf);
        if (k < 0 && errno == EINTR)
            continue;
        if (k <= 0)
            break;
        out.append(buf, static_cast<std::size_t>(k));
    }
    return out;
}

void parse_into(std::string const & text, std::string const & path,
                std::map<std::string, nlohmann::json> & entries)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (nlohmann::json::exception const & e) {
            throw input_error("cache " + path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("key") || !j["key"].is_string() || !j.contains("report"))
            throw input_error("cache " + path + ":" + std::to_string(lineno) +
                              ": expected {\"key\", \"report\"}");
        entries.emplace(j["key"].get<std::string>(), j["report"]);
    }
}

} // namespace

survey_cache::survey_cache(std::string path) : path_(std::move(path)) { load(); }

void survey_cache::load()
{
    std::lock_guard<std::mutex> guard(mutex_);
    entries_.clear();
    locked_fd f(path_, O_RDONLY, LOCK_SH);
    if (f.fd < 0) {
        if (errno == ENOENT)
            return;
        throw input_error("cache: cannot open " + path_ + ": " + std::strerror(errno));
    }
    parse_into(read_all(f.fd), path_, entries_);
}

std::optional<nlohmann::json> survey_cache::lookup(std::string const & key) const
{
    std::lock_guard<std::mutex> guard(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void survey_cache::store(std::vector<std::pair<std::string, nlohmann::json>> const & records)
{
    std::lock_guard<std::mutex> guard(mutex_);
    locked_fd f(path_, O_RDWR | O_CREAT | O_APPEND, LOCK_EX);
    if (f.fd < 0)
        throw input_error("cache: cannot open " + path_ + " for writing: " + std::strerror(errno));
    /* another process may have appended since the last load */
    parse_into(read_all(f.fd), path_, entries_);
    std::string out;
    for (auto const & [key, report] : records) {
        if (!entries_.emplace(key, report).second)
            continue;
        out += nlohmann::json{{"key", key}, {"report", report}}.dump();
        out += '\n';
    }
    std::size_t done = 0;
    while (done < out.size()) {
        ssize_t k = ::write(f.fd, out.data() + done, out.size() - done);
        if (k < 0) {
            if (errno == EINTR)
                continue;
            throw input_error("cache: write to " + path_ + " failed: " + std::strerror(errno));
        }
        done += static_cast<std::size_t>(k);
    }
}

std::size_t survey_cache::size() const
{
    std::lock_guard<std::mutex> guard(mutex_);
    return entries_.size();
}

} // namespace gldual
