/* config.hpp -- flat key=value experiment configuration. */

#ifndef LCV_CONFIG_HPP
#define LCV_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcv/world.hpp"

namespace lcv {

struct ExperimentConfig {
    std::string course_kind = "loop";
    int course_length = 2000;

    double sigma_xy = 0.02;      /* odometry noise per step, meters */
    double sigma_theta = 0.005;  /* radians */

    int n_candidates = 50;       /* N_t */
    int window = 10;             /* W */
    int k_per_step = 10;         /* verification budget per time step */

    double consistency_threshold = 10.0;  /* T_p, meters */
    double revisit_radius = 10.0;
    double triviality_cutoff = 100.0;     /* meters of travel */

    double p_true_accept = 0.8;
    double p_false_accept = 0.1;
    double score_noise_sigma = 0.1;

    double mu_true = 0.7;        /* retrieval score populations */
    double mu_alias = 0.5;
    double mu_distractor = 0.3;
    double score_sigma = 0.15;

    std::string constraint_mix = "1:0:0";  /* uniform : NS : TS */
    std::string hypothesis_mix = "1:0:0";  /* uniform : DF : BF */

    double verify_threshold = 0.5;
    std::vector<double> thresholds = {0.05, 0.15, 0.25, 0.35, 0.45,
                                      0.55, 0.65, 0.75, 0.85, 0.95};

    double loop_info_scale = 10.0;  /* loop edge weight relative to odometry */
    uint64_t seed = 1;
    bool dump_consistency = false;
};

/* One `key = value` per line, `#` comments. Unknown keys are errors. */
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& config);
void save_config(const std::string& path, const ExperimentConfig& config);

}  // namespace lcv

#endif  // LCV_CONFIG_HPP
