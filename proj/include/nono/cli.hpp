#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nono/bench.hpp"
#include "nono/dataset.hpp"
#include "nono/enumerate.hpp"
#include "nono/genetic.hpp"
#include "nono/io.hpp"
#include "nono/mlp.hpp"
#include "nono/solve.hpp"
#include "nono/stats.hpp"
#include "nono/version.hpp"

namespace nono {

namespace detail {

inline std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw std::runtime_error(std::string("empty ") + what + " list");
  return out;
}

inline std::vector<std::string> puzzle_files_in(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 12 && name.substr(name.size() - 12) == ".puzzle.json")
      files.push_back(entry.path().string());
    else if (name.size() > 5 && name.substr(name.size() - 5) == ".json" &&
             name.find("manifest") == std::string::npos &&
             name.find(".puzzle.") == std::string::npos)
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no puzzle files under '" + dir + "'");
  return files;
}

inline std::unique_ptr<MlpPredictor> load_predictor(const std::string& weights_path, int puzzle_n) {
  MlpModel model = load_weights(weights_path);
  if (model.n != puzzle_n)
    throw std::runtime_error("weights are for " + std::to_string(model.n) + "x" +
                             std::to_string(model.n) + " boards but the puzzle is " +
                             std::to_string(puzzle_n) + "x" + std::to_string(puzzle_n));
  return std::make_unique<MlpPredictor>(std::move(model));
}

inline json json_array_file(const std::string& path) {
  const json j = json::parse(read_text_file(path));
  if (!j.is_array()) throw std::runtime_error("'" + path + "' must hold a JSON array");
  return j;
}

}  // namespace detail

// Command-line entry point; streams are injectable so the surface is testable
// in-process. Exit codes: 0 success, 1 domain failure (puzzle unsolved),
// 2 usage or input errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nonosuite: nonogram solvers, dataset tools and benchmarks"};
  app.set_version_flag("--version", std::string("nonosuite ") + kVersion + " (weights format " +
                                        kWeightsFormat + ")");
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve one puzzle with a heuristic variant");
  std::string solve_puzzle, solve_variant = "H", solve_weights, solve_out, solve_report;
  std::uint64_t solve_seed = 0;
  std::uint64_t solve_node_limit = 0;
  double solve_time_limit = 0.0;
  solve_cmd->add_option("--puzzle", solve_puzzle, "puzzle JSON file")->required();
  solve_cmd->add_option("--variant", solve_variant, "H|NeHI|Ne8HI|NeHPF|Ne8HPF|NeHPFI|Ne8HPFI");
  solve_cmd->add_option("--seed", solve_seed, "RNG seed");
  solve_cmd->add_option("--weights", solve_weights, "weights file (network variants)");
  solve_cmd->add_option("--node-limit", solve_node_limit, "stop after this many iterations");
  solve_cmd->add_option("--time-limit", solve_time_limit, "stop after this many seconds");
  solve_cmd->add_option("--out", solve_out, "write the solution board here");
  solve_cmd->add_option("--report", solve_report, "write the report JSON here");

  // --- ga ------------------------------------------------------------------
  auto* ga_cmd = app.add_subcommand("ga", "genetic search on one puzzle");
  std::string ga_puzzle, ga_weights, ga_out, ga_report;
  GaConfig ga_cfg;
  ga_cmd->add_option("--puzzle", ga_puzzle, "puzzle JSON file")->required();
  ga_cmd->add_option("--population", ga_cfg.population_size, "population size");
  ga_cmd->add_option("--generations", ga_cfg.max_generations, "generation budget");
  ga_cmd->add_option("--seed", ga_cfg.rng_seed, "RNG seed");
  ga_cmd->add_option("--elitism", ga_cfg.elitism, "parents kept each generation");
  ga_cmd->add_flag("--steady-state", ga_cfg.steady_state, "replace the worst individual per child");
  ga_cmd->add_option("--weights", ga_weights, "weights file for the seed prediction");
  ga_cmd->add_option("--out", ga_out, "write the solution board here");
  ga_cmd->add_option("--report", ga_report, "write the report JSON here");

  // --- train ---------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "train a network on a generated dataset");
  std::string train_root, train_split = "train", train_hidden, train_out, train_report;
  TrainConfig train_cfg;
  train_cfg.epochs = 100;
  double train_dropout = 0.05;
  int train_max_samples = 0;
  train_cmd->add_option("--dataset", train_root, "dataset root directory")->required();
  train_cmd->add_option("--split", train_split, "dataset split to train on");
  train_cmd->add_option("--hidden", train_hidden, "hidden layer sizes, e.g. 128,64");
  train_cmd->add_option("--epochs", train_cfg.epochs, "training epochs");
  train_cmd->add_option("--lr", train_cfg.learning_rate, "learning rate");
  train_cmd->add_option("--batch", train_cfg.batch_size, "mini-batch size");
  train_cmd->add_option("--dropout", train_dropout, "hidden dropout rate");
  train_cmd->add_option("--seed", train_cfg.rng_seed, "RNG seed");
  train_cmd->add_flag("--augment-reflections", train_cfg.augment_reflections,
                      "train on all eight reflections of each sample");
  train_cmd->add_option("--max-samples", train_max_samples, "cap the sample count (0 = all)");
  train_cmd->add_option("--out", train_out, "weights output file")->required();
  train_cmd->add_option("--report", train_report, "write loss history JSON here");

  // --- predict ---------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "run a trained network on one puzzle");
  std::string predict_puzzle, predict_weights, predict_out, predict_probs;
  double predict_threshold = 0.5;
  predict_cmd->add_option("--puzzle", predict_puzzle, "puzzle JSON file")->required();
  predict_cmd->add_option("--weights", predict_weights, "weights file")->required();
  predict_cmd->add_option("--threshold", predict_threshold, "fill threshold");
  predict_cmd->add_option("--out", predict_out, "write the binarized board here");
  predict_cmd->add_option("--probs", predict_probs, "write the probability grid JSON here");

  // --- generate --------------------------------------------------------------
  auto* generate_cmd = app.add_subcommand("generate", "build a dataset of boards and headers");
  DatasetSpec gen_spec;
  std::vector<std::string> gen_images;
  std::string gen_image_dir;
  generate_cmd->add_option("--n", gen_spec.n, "board size")->required();
  generate_cmd->add_option("--noise", gen_spec.noise_count, "number of uniform-noise boards");
  generate_cmd->add_option("--figures", gen_spec.figures_count, "number of random-figure boards");
  generate_cmd->add_option("--images", gen_images, "PGM images to transform");
  generate_cmd->add_option("--image-dir", gen_image_dir, "directory scanned for *.pgm");
  generate_cmd->add_option("--seed", gen_spec.rng_seed, "RNG seed");
  generate_cmd->add_option("--out", gen_spec.output_root, "dataset root directory")->required();

  // --- enumerate ---------------------------------------------------------------
  auto* enum_cmd = app.add_subcommand("enumerate", "count boards and valid encodings for size n");
  int enum_n = 0;
  bool enum_allow_large = false;
  enum_cmd->add_option("--n", enum_n, "board size")->required();
  enum_cmd->add_flag("--allow-large", enum_allow_large, "lift the n <= 5 cost guard");

  // --- bench ---------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "benchmark solver variants over a puzzle set");
  std::string bench_dir, bench_variants = "H", bench_weights, bench_out, bench_tables;
  BenchOptions bench_opt;
  int bench_limit = 0;
  bench_cmd->add_option("--puzzles", bench_dir, "directory of *.puzzle.json files")->required();
  bench_cmd->add_option("--variants", bench_variants, "comma-separated variant names");
  bench_cmd->add_option("--reps", bench_opt.repetitions, "timed repetitions per puzzle");
  bench_cmd->add_flag("--include-warmup", bench_opt.include_warmup, "keep the warm-up sample");
  bench_cmd->add_option("--jobs", bench_opt.jobs, "parallel workers (1 = publication-grade serial)");
  bench_cmd->add_option("--seed", bench_opt.seed, "RNG seed");
  bench_cmd->add_option("--limit", bench_limit, "use only the first N puzzles (0 = all)");
  bench_cmd->add_option("--weights", bench_weights, "weights file (network variants)");
  bench_cmd->add_option("--out", bench_out, "write the report JSON here");
  bench_cmd->add_option("--tables", bench_tables, "write the rendered tables here");

  // --- analyze ---------------------------------------------------------------
  auto* analyze_cmd = app.add_subcommand("analyze", "fit and test stored measurement samples");
  std::string an_errors, an_times, an_times_a, an_times_b, an_out;
  analyze_cmd->add_option("--errors", an_errors, "JSON array of per-board error counts");
  analyze_cmd->add_option("--times", an_times, "JSON array of durations");
  analyze_cmd->add_option("--times-a", an_times_a, "paired durations, first series");
  analyze_cmd->add_option("--times-b", an_times_b, "paired durations, second series");
  analyze_cmd->add_option("--out", an_out, "write the analysis JSON here");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (solve_cmd->parsed()) {
      const ClueSet clues = read_puzzle_file(solve_puzzle);
      SolverConfig cfg = SolverConfig::for_variant(variant_from_name(solve_variant), solve_seed);
      if (solve_node_limit > 0) cfg.node_limit = solve_node_limit;
      if (solve_time_limit > 0) cfg.time_limit_seconds = solve_time_limit;
      std::unique_ptr<MlpPredictor> predictor;
      if (variant_uses_predictor(cfg.variant)) {
        if (solve_weights.empty())
          throw std::runtime_error("variant " + solve_variant + " needs --weights");
        predictor = detail::load_predictor(solve_weights, clues.n);
      }
      const SolveReport report = solve(clues, predictor.get(), cfg);
      const json j = solve_report_to_json(report);
      out << j.dump(2) << "\n";
      if (!solve_report.empty()) write_text_file(solve_report, j.dump(2) + "\n");
      if (!solve_out.empty() && report.solution) write_board_file(*report.solution, solve_out);
      return report.status == SolveStatus::Solved ? 0 : 1;
    }

    if (ga_cmd->parsed()) {
      const ClueSet clues = read_puzzle_file(ga_puzzle);
      std::unique_ptr<MlpPredictor> predictor;
      if (!ga_weights.empty()) predictor = detail::load_predictor(ga_weights, clues.n);
      const SolveReport report = run_ga(clues, predictor.get(), ga_cfg);
      const json j = solve_report_to_json(report);
      out << j.dump(2) << "\n";
      if (!ga_report.empty()) write_text_file(ga_report, j.dump(2) + "\n");
      if (!ga_out.empty() && report.solution) write_board_file(*report.solution, ga_out);
      return report.status == SolveStatus::Solved ? 0 : 1;
    }

    if (train_cmd->parsed()) {
      const auto records = load_dataset_split(train_root, train_split);
      if (records.empty()) throw std::runtime_error("dataset split is empty");
      std::vector<TrainSample> samples;
      for (const auto& [clues, board] : records) {
        samples.push_back({clues, board});
        if (train_max_samples > 0 && static_cast<int>(samples.size()) >= train_max_samples) break;
      }
      const int n = samples.front().clues.n;
      Rng init_rng(train_cfg.rng_seed);
      MlpModel model =
          train_hidden.empty()
              ? MlpModel::default_for(n, init_rng)
              : MlpModel::make(n, detail::parse_int_list(train_hidden, "hidden layer"), train_dropout,
                               init_rng);
      model.dropout_rate = train_dropout;
      err << "training on " << samples.size() << " samples, " << model.parameter_count()
          << " parameters\n";
      const TrainResult history = train(model, samples, train_cfg);
      const ModelAccuracy acc = evaluate_accuracy(model, samples);
      save_weights(model, train_out);
      json j{{"samples", samples.size()},
             {"epochs", train_cfg.epochs},
             {"final_loss", history.loss_history.back()},
             {"loss_history", history.loss_history},
             {"train_cell_accuracy", acc.cell_accuracy},
             {"train_board_accuracy", acc.board_accuracy},
             {"weights", train_out}};
      out << j.dump(2) << "\n";
      if (!train_report.empty()) write_text_file(train_report, j.dump(2) + "\n");
      return 0;
    }

    if (predict_cmd->parsed()) {
      const ClueSet clues = read_puzzle_file(predict_puzzle);
      const auto predictor = detail::load_predictor(predict_weights, clues.n);
      const PredictionGrid grid = predictor->predict(clues);
      const Board board = binarize(grid, predict_threshold);
      if (!predict_probs.empty()) {
        write_text_file(predict_probs, json{{"n", grid.n}, {"p", grid.p}}.dump(2) + "\n");
      }
      if (!predict_out.empty())
        write_board_file(board, predict_out);
      else
        out << format_board(board);
      return 0;
    }

    if (generate_cmd->parsed()) {
      std::vector<std::string> images = gen_images;
      if (!gen_image_dir.empty()) {
        namespace fs = std::filesystem;
        if (!fs::is_directory(gen_image_dir))
          throw std::runtime_error("'" + gen_image_dir + "' is not a directory");
        std::vector<std::string> found;
        for (const auto& entry : fs::directory_iterator(gen_image_dir))
          if (entry.path().extension() == ".pgm") found.push_back(entry.path().string());
        std::sort(found.begin(), found.end());
        images.insert(images.end(), found.begin(), found.end());
      }
      const DatasetResult result = generate_dataset(gen_spec, images);
      err << "wrote " << result.records << " records under " << gen_spec.output_root << "\n";
      out << json{{"records", result.records},
                  {"train", result.train_records},
                  {"test", result.test_records},
                  {"images_used", result.images_used},
                  {"images_skipped", result.images_skipped},
                  {"duplicates_removed", result.duplicates_removed},
                  {"manifest", result.manifest_path}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (enum_cmd->parsed()) {
      const std::string omega = count_boards(enum_n);
      const std::uint64_t psi = count_valid_clue_sets(enum_n, enum_allow_large);
      const double ratio =
          static_cast<double>(psi) / static_cast<double>(count_boards_u64(enum_n));
      char ratio_text[32];
      std::snprintf(ratio_text, sizeof ratio_text, "%.3f", ratio);
      out << omega << " " << psi << " " << ratio_text << "\n";
      return 0;
    }

    if (bench_cmd->parsed()) {
      std::vector<std::string> files = detail::puzzle_files_in(bench_dir);
      if (bench_limit > 0 && static_cast<int>(files.size()) > bench_limit)
        files.resize(bench_limit);
      std::vector<ClueSet> puzzles;
      for (const std::string& f : files) puzzles.push_back(read_puzzle_file(f));
      std::vector<SolverConfig> configs;
      bool needs_predictor = false;
      {
        std::string item;
        std::istringstream in(bench_variants);
        while (std::getline(in, item, ',')) {
          configs.push_back(SolverConfig::for_variant(variant_from_name(item)));
          needs_predictor |= variant_uses_predictor(configs.back().variant);
        }
      }
      if (configs.empty()) throw std::runtime_error("no variants given");
      std::unique_ptr<MlpPredictor> predictor;
      if (needs_predictor) {
        if (bench_weights.empty()) throw std::runtime_error("network variants need --weights");
        predictor = detail::load_predictor(bench_weights, puzzles.front().n);
      }
      err << "benchmarking " << configs.size() << " variants on " << puzzles.size()
          << " puzzles x " << bench_opt.repetitions << " repetitions\n";
      const BenchReport report = benchmark(puzzles, configs, predictor.get(), bench_opt);
      const json j = bench_report_to_json(report);
      out << j.dump(2) << "\n";
      if (!bench_out.empty()) write_text_file(bench_out, j.dump(2) + "\n");
      const std::string tables = render_bench_tables(report);
      if (!bench_tables.empty())
        write_text_file(bench_tables, tables);
      else
        err << tables;
      return 0;
    }

    if (analyze_cmd->parsed()) {
      json result = json::object();
      if (!an_errors.empty()) {
        std::vector<int> samples;
        for (const auto& v : detail::json_array_file(an_errors)) samples.push_back(v.get<int>());
        const WeibullFit fit = fit_weibull(samples);
        result["weibull"] = {{"alpha", fit.params.alpha},
                             {"beta", fit.params.beta},
                             {"neg_log_likelihood", fit.neg_log_likelihood},
                             {"mode", weibull_mode(fit.params)},
                             {"samples", samples.size()}};
      }
      if (!an_times.empty()) {
        std::vector<double> samples;
        for (const auto& v : detail::json_array_file(an_times)) samples.push_back(v.get<double>());
        result["time_stats"] = time_stats_to_json(time_stats(samples));
      }
      if (!an_times_a.empty() || !an_times_b.empty()) {
        if (an_times_a.empty() || an_times_b.empty())
          throw std::runtime_error("--times-a and --times-b must be given together");
        const json a = detail::json_array_file(an_times_a);
        const json b = detail::json_array_file(an_times_b);
        if (a.size() != b.size()) throw std::runtime_error("paired series differ in length");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < a.size(); ++i)
          pairs.emplace_back(a[i].get<double>(), b[i].get<double>());
        const WilcoxonResult w = wilcoxon_signed_rank(pairs);
        result["wilcoxon"] = {{"W", w.w_plus},
                              {"w_minus", w.w_minus},
                              {"p", w.p_value},
                              {"method", w.method},
                              {"n_nonzero", w.n_nonzero}};
      }
      if (result.empty()) throw std::runtime_error("analyze: nothing to do (see --help)");
      out << result.dump(2) << "\n";
      if (!an_out.empty()) write_text_file(an_out, result.dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace nono
