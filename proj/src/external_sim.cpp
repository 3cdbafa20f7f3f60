#include "wellopt/external_sim.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "wellopt/errors.hpp"

namespace wellopt {

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

std::atomic<unsigned long> exchange_counter{0};

}  // namespace

ProductionProfile ExternalSimulator::run(
    const ControlSchedule& schedule, const std::vector<std::string>& producer_names) const {
    if (command.empty())
        throw std::invalid_argument("external simulator: empty command");
    schedule.validate();
    if (static_cast<int>(producer_names.size()) != schedule.wells)
        throw std::invalid_argument("external simulator: schedule/well-name mismatch");

    namespace fs = std::filesystem;
    const fs::path dir = workdir.empty() ? fs::path(".") : fs::path(workdir);
    fs::create_directories(dir);
    const unsigned long k = exchange_counter++;
    const fs::path sched_file = dir / ("schedule_" + std::to_string(k) + ".json");
    const fs::path prof_file = dir / ("profile_" + std::to_string(k) + ".json");

    nlohmann::json sched;
    sched["horizon_days"] = schedule.horizon_days;
    sched["steps_per_well"] = schedule.steps_per_well;
    sched["wells"] = producer_names;
    sched["rates"] = schedule.values;
    {
        std::ofstream out(sched_file);
        if (!out)
            throw SimulationError("cannot write " + sched_file.string(), 0);
        out << sched.dump(2) << '\n';
    }

    std::string cmdline;
    for (const std::string& part : command) {
        if (!cmdline.empty()) cmdline += ' ';
        cmdline += shell_quote(part);
    }
    cmdline += ' ' + shell_quote(sched_file.string());
    cmdline += ' ' + shell_quote(prof_file.string());
    const int status = std::system(cmdline.c_str());
    if (status != 0)
        throw SimulationError("external simulator exited with status " +
                                  std::to_string(status),
                              0);

    std::ifstream in(prof_file);
    if (!in)
        throw SimulationError("external simulator produced no profile at " +
                                  prof_file.string(),
                              0);
    ProductionProfile profile;
    try {
        nlohmann::json doc;
        in >> doc;
        int n = 0;
        for (const auto& s : doc.at("steps")) {
            ProductionProfile::Step step;
            step.dt_days = s.at("dt_days").get<double>();
            step.t_end_days = s.at("t_end_days").get<double>();
            step.q_op = s.at("q_op").get<double>();
            step.q_wp = s.at("q_wp").get<double>();
            step.q_wi = s.at("q_wi").get<double>();
            step.q_gp = s.value("q_gp", 0.0);
            profile.steps.push_back(step);
            profile.cum_oil += step.q_op * step.dt_days;
            profile.cum_water += step.q_wp * step.dt_days;
            profile.injected += step.q_wi * step.dt_days;
            profile.produced += (step.q_op + step.q_wp) * step.dt_days;
            ++n;
        }
        if (n == 0) throw std::runtime_error("profile holds no steps");
    } catch (const std::exception& e) {
        throw SimulationError("external profile " + prof_file.string() +
                                  " is malformed: " + e.what(),
                              0);
    }
    profile.producer_names = producer_names;
    return profile;
}

}  // namespace wellopt
