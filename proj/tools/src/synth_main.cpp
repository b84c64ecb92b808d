// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes the Gaussian benchmark (dataset.jsonl + embeddings.bin) so the CLI
// can be exercised without external encoders.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "oodkit/error.hpp"
#include "oodkit/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic Gaussian OOD benchmark", "oodkit-synth"};
  oodkit::SyntheticSpec spec;
  std::string out_dir = "synth";
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", spec.seed, "generator seed");
  app.add_option("--dim", spec.dim, "base dimension");
  app.add_option("--clusters", spec.n_id_clusters, "ID clusters");
  app.add_option("--points", spec.points_per_cluster, "points per cluster");
  app.add_option("--distance", spec.center_distance, "pairwise ID centre distance");
  app.add_option("--ood-offset", spec.ood_offset, "OOD centre distance from the nearest ID centre");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto data = oodkit::make_synthetic(spec);
    std::filesystem::create_directories(out_dir);
    oodkit::save_dataset(data.dataset, std::filesystem::path(out_dir) / "dataset.jsonl");
    oodkit::save_embeddings(data.embeddings, std::filesystem::path(out_dir) / "embeddings.bin");
    std::cout << "wrote " << data.dataset.size() << " records to " << out_dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return oodkit::exit_code_for(e);
  }
  return 0;
}
