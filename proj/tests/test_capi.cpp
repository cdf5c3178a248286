#include "lete.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

/**
 * C-interface tests, exercised strictly through the shared library surface:
 * handle lifecycle, encoding, persistence with its status-code taxonomy,
 * the thread-local error message, and the experiment drivers' file outputs.
 */
class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("lete_capi_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static lete_encoder* make_combined(int d, uint64_t seed = 3) {
    lete_encoder_config cfg;
    lete_encoder_config_init(&cfg);
    cfg.d = d;
    cfg.seed = seed;
    lete_encoder* enc = nullptr;
    EXPECT_EQ(lete_encoder_create(&cfg, &enc), LETE_OK) << lete_last_error();
    return enc;
  }

  void write_text(const std::string& p, const std::string& text) const {
    std::ofstream out(p);
    out << text;
  }

  fs::path dir_;
};

// ---------------------------------------------------------------------------
// Configuration and handle lifecycle
// ---------------------------------------------------------------------------

TEST_F(CApiTest, ConfigInitFillsDocumentedDefaults) {
  lete_encoder_config cfg;
  std::memset(&cfg, 0xAB, sizeof cfg);
  lete_encoder_config_init(&cfg);
  EXPECT_EQ(cfg.kind, LETE_ENCODER_COMBINED);
  EXPECT_EQ(cfg.d, 8);
  EXPECT_DOUBLE_EQ(cfg.p, 0.5);
  EXPECT_EQ(cfg.k_max, 5);
  EXPECT_EQ(cfg.degree, 3);
  EXPECT_EQ(cfg.grid_size, 8);
  EXPECT_DOUBLE_EQ(cfg.span_lo, -2.0);
  EXPECT_DOUBLE_EQ(cfg.span_hi, 2.0);
  EXPECT_NE(cfg.dense_fourier, 0);
  EXPECT_EQ(cfg.raw_output, 0);
  EXPECT_EQ(cfg.seed, 0u);
}

TEST_F(CApiTest, CreateEncodeDestroyRoundTrip) {
  lete_encoder* enc = make_combined(4);
  ASSERT_NE(enc, nullptr);
  int32_t dim = 0;
  ASSERT_EQ(lete_encoder_dim(enc, &dim), LETE_OK);
  EXPECT_EQ(dim, 4);
  double out[4];
  ASSERT_EQ(lete_encoder_encode(enc, 0.3, out, 4), LETE_OK);
  for (double v : out) EXPECT_TRUE(std::isfinite(v));
  lete_encoder_destroy(enc);
}

TEST_F(CApiTest, NullArgumentsAreRejectedWithMessages) {
  EXPECT_EQ(lete_encoder_create(nullptr, nullptr), LETE_INVALID_ARG);
  EXPECT_NE(std::strlen(lete_last_error()), 0u);
  double out[1];
  EXPECT_EQ(lete_encoder_encode(nullptr, 0.0, out, 1), LETE_INVALID_ARG);
  int32_t dim;
  EXPECT_EQ(lete_encoder_dim(nullptr, &dim), LETE_INVALID_ARG);
  EXPECT_EQ(lete_encoder_load(nullptr, nullptr), LETE_INVALID_ARG);
  lete_encoder_destroy(nullptr);  // must be a safe no-op
}

TEST_F(CApiTest, EncodeValidatesOutputLength) {
  lete_encoder* enc = make_combined(4);
  double out[3];
  EXPECT_EQ(lete_encoder_encode(enc, 0.0, out, 3), LETE_INVALID_ARG);
  EXPECT_NE(std::strlen(lete_last_error()), 0u);
  lete_encoder_destroy(enc);
}

TEST_F(CApiTest, BatchEncodeMatchesScalarEncode) {
  lete_encoder* enc = make_combined(5);
  std::vector<double> ts;
  for (int i = 0; i < 10; ++i) ts.push_back(-2.0 + 0.41 * i);
  std::vector<double> batch(10 * 5);
  ASSERT_EQ(lete_encoder_encode_batch(enc, ts.data(), ts.size(), batch.data(), batch.size()),
            LETE_OK);
  double row[5];
  for (size_t i = 0; i < ts.size(); ++i) {
    ASSERT_EQ(lete_encoder_encode(enc, ts[i], row, 5), LETE_OK);
    for (size_t j = 0; j < 5; ++j) EXPECT_EQ(batch[i * 5 + j], row[j]);
  }
  EXPECT_EQ(lete_encoder_encode_batch(enc, ts.data(), ts.size(), batch.data(), 7),
            LETE_INVALID_ARG);
  lete_encoder_destroy(enc);
}

// ---------------------------------------------------------------------------
// Baselines and sine replication
// ---------------------------------------------------------------------------

TEST_F(CApiTest, BaselineDimensionsFollowFamilyRules) {
  const double omega[2] = {1.0, 3.0};
  lete_encoder* ftr = nullptr;
  ASSERT_EQ(lete_encoder_create_baseline(LETE_ENCODER_FTR, omega, nullptr, 2, &ftr), LETE_OK);
  int32_t dim = 0;
  lete_encoder_dim(ftr, &dim);
  EXPECT_EQ(dim, 4);  // one cos/sin pair per frequency
  lete_encoder_destroy(ftr);

  lete_encoder* us = nullptr;
  ASSERT_EQ(lete_encoder_create_baseline(LETE_ENCODER_UNIFIED_SIN, omega, nullptr, 2, &us),
            LETE_OK);
  lete_encoder_dim(us, &dim);
  EXPECT_EQ(dim, 2);
  // Null phi means zero phases: out[i] = sin(omega_i * t).
  double out[2];
  ASSERT_EQ(lete_encoder_encode(us, 0.7, out, 2), LETE_OK);
  EXPECT_DOUBLE_EQ(out[0], std::sin(0.7));
  EXPECT_DOUBLE_EQ(out[1], std::sin(3.0 * 0.7));
  lete_encoder_destroy(us);
}

TEST_F(CApiTest, ReplicateSinReproducesTheSineFamily) {
  const double omega[2] = {0.5, 2.0};
  const double phi[2] = {0.1, -0.3};
  lete_encoder* enc = nullptr;
  ASSERT_EQ(lete_encoder_replicate_sin(omega, phi, 2, &enc), LETE_OK) << lete_last_error();
  double out[2];
  for (int i = 0; i < 50; ++i) {
    const double t = -10.0 + 0.41 * i;
    ASSERT_EQ(lete_encoder_encode(enc, t, out, 2), LETE_OK);
    EXPECT_NEAR(out[0], std::sin(0.5 * t + 0.1), 1e-12);
    EXPECT_NEAR(out[1], std::sin(2.0 * t - 0.3), 1e-12);
  }
  lete_encoder_destroy(enc);
}

// ---------------------------------------------------------------------------
// Persistence and the status taxonomy
// ---------------------------------------------------------------------------

TEST_F(CApiTest, SaveLoadRoundTripsBitwise) {
  lete_encoder* enc = make_combined(6, 17);
  ASSERT_EQ(lete_encoder_save(enc, path("m.json").c_str()), LETE_OK) << lete_last_error();
  lete_encoder* back = nullptr;
  ASSERT_EQ(lete_encoder_load(path("m.json").c_str(), &back), LETE_OK) << lete_last_error();
  double a[6], b[6];
  for (int i = 0; i < 100; ++i) {
    const double t = -5.0 + 0.1 * i;
    ASSERT_EQ(lete_encoder_encode(enc, t, a, 6), LETE_OK);
    ASSERT_EQ(lete_encoder_encode(back, t, b, 6), LETE_OK);
    for (int j = 0; j < 6; ++j) EXPECT_EQ(a[j], b[j]) << "t=" << t;
  }
  lete_encoder_destroy(enc);
  lete_encoder_destroy(back);
}

TEST_F(CApiTest, LoadFailuresMapToDistinctStatusCodes) {
  lete_encoder* out = nullptr;
  EXPECT_EQ(lete_encoder_load(path("missing.json").c_str(), &out), LETE_IO_ERROR);
  EXPECT_NE(std::strlen(lete_last_error()), 0u);

  write_text(path("garbage.json"), "{ not json");
  EXPECT_EQ(lete_encoder_load(path("garbage.json").c_str(), &out), LETE_SCHEMA_ERROR);

  write_text(path("future.json"), "{\"format_version\": 2}");
  EXPECT_EQ(lete_encoder_load(path("future.json").c_str(), &out), LETE_VERSION_ERROR);

  write_text(path("incomplete.json"), "{\"format_version\": 1}");
  EXPECT_EQ(lete_encoder_load(path("incomplete.json").c_str(), &out), LETE_SCHEMA_ERROR);
  EXPECT_EQ(out, nullptr);  // outputs untouched on failure
}

TEST_F(CApiTest, StatusNamesAreStable) {
  EXPECT_STREQ(lete_status_name(LETE_OK), "LETE_OK");
  EXPECT_STREQ(lete_status_name(LETE_INVALID_ARG), "LETE_INVALID_ARG");
  EXPECT_STREQ(lete_status_name(LETE_IO_ERROR), "LETE_IO_ERROR");
  EXPECT_STREQ(lete_status_name(LETE_SCHEMA_ERROR), "LETE_SCHEMA_ERROR");
  EXPECT_STREQ(lete_status_name(LETE_VERSION_ERROR), "LETE_VERSION_ERROR");
  EXPECT_STREQ(lete_status_name(LETE_DATA_ERROR), "LETE_DATA_ERROR");
  EXPECT_STREQ(lete_status_name(LETE_DIVERGED), "LETE_DIVERGED");
  EXPECT_STREQ(lete_status_name(LETE_INTERNAL_ERROR), "LETE_INTERNAL_ERROR");
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

TEST_F(CApiTest, RunFitWritesReportAndModel) {
  lete_fit_result res;
  ASSERT_EQ(lete_run_fit("fourier", "sin", -1.0, 40, 1e-2, 0, path("fit").c_str(), "csv", &res),
            LETE_OK)
      << lete_last_error();
  EXPECT_GE(res.final_mse, 0.0);
  EXPECT_TRUE(std::isfinite(res.oracle_mse));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "fit_report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "model.json"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "loss_curve.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "curve_samples.csv"));

  // The saved model must load back through the same C surface.
  lete_encoder* enc = nullptr;
  ASSERT_EQ(lete_encoder_load((dir_ / "fit" / "model.json").string().c_str(), &enc), LETE_OK)
      << lete_last_error();
  int32_t dim = 0;
  lete_encoder_dim(enc, &dim);
  EXPECT_EQ(dim, 1);
  lete_encoder_destroy(enc);
}

TEST_F(CApiTest, RunFitRejectsBadNamesAndFractions) {
  lete_fit_result res;
  EXPECT_EQ(lete_run_fit("mlp", "sin", -1.0, 10, 1e-2, 0, path("x").c_str(), "csv", &res),
            LETE_INVALID_ARG);
  EXPECT_EQ(lete_run_fit("fourier", "tan", -1.0, 10, 1e-2, 0, path("x").c_str(), "csv", &res),
            LETE_INVALID_ARG);
  EXPECT_EQ(lete_run_fit("fourier", "sin", 1.5, 10, 1e-2, 0, path("x").c_str(), "csv", &res),
            LETE_INVALID_ARG);
  EXPECT_EQ(lete_run_fit("fourier", "sin", -1.0, 10, 1e-2, 0, path("x").c_str(), "tsv", &res),
            LETE_INVALID_ARG);
}

TEST_F(CApiTest, RunReconstructionWritesReport) {
  lete_fit_result res;
  ASSERT_EQ(lete_run_reconstruction("combined", "mixed", 4, 64, 30, 1e-2, 1,
                                    path("rec").c_str(), "json", &res),
            LETE_OK)
      << lete_last_error();
  EXPECT_GE(res.final_mse, 0.0);
  EXPECT_TRUE(std::isnan(res.oracle_mse));  // no closed-form oracle here
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "fit_report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "rec" / "model.json"));
  // json format embeds the tables instead of writing CSVs.
  EXPECT_FALSE(fs::exists(dir_ / "rec" / "loss_curve.csv"));
}

TEST_F(CApiTest, RunEntropyFileComputesPerNodeSpectra) {
  std::string csv = "node_id,timestamp\n";
  for (int i = 0; i < 40; ++i) csv += "a," + std::to_string(0.25 * i) + "\n";
  for (int i = 0; i < 40; ++i) csv += "b," + std::to_string(0.031 * i * i) + "\n";
  csv += "c,1\nc,2\n";  // below the threshold, must be filtered out
  write_text(path("events.csv"), csv);

  lete_entropy_result res;
  ASSERT_EQ(lete_run_entropy_file(path("events.csv").c_str(), 5, "bins", path("ent").c_str(),
                                  "csv", &res),
            LETE_OK)
      << lete_last_error();
  EXPECT_EQ(res.n_sequences, 2u);
  EXPECT_TRUE(std::isfinite(res.mean_entropy));
  EXPECT_GE(res.mean_entropy, 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "ent" / "entropy_report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "ent" / "entropy.csv"));

  EXPECT_EQ(lete_run_entropy_file(path("absent.csv").c_str(), 5, "bins", path("e2").c_str(),
                                  "csv", &res),
            LETE_IO_ERROR);
  EXPECT_EQ(lete_run_entropy_file(path("events.csv").c_str(), -1, "bins", path("e2").c_str(),
                                  "csv", &res),
            LETE_INVALID_ARG);
  EXPECT_EQ(lete_run_entropy_file(path("events.csv").c_str(), 5, "fourier", path("e2").c_str(),
                                  "csv", &res),
            LETE_INVALID_ARG);
}

TEST_F(CApiTest, RunEntropyFileSkipsSpectrallyDegenerateNodes) {
  // 64 exactly regular events land one per default histogram bin, leaving a
  // constant count series with no non-DC spectral content. Such a node must
  // be dropped from the table like a below-threshold one, not fail the run.
  std::string csv = "node_id,timestamp\n";
  for (int i = 0; i < 64; ++i) csv += "flat," + std::to_string(0.5 * i) + "\n";
  for (int i = 0; i < 40; ++i) csv += "b," + std::to_string(0.031 * i * i) + "\n";
  write_text(path("events.csv"), csv);

  lete_entropy_result res;
  ASSERT_EQ(lete_run_entropy_file(path("events.csv").c_str(), 5, "bins", path("ent").c_str(),
                                  "csv", &res),
            LETE_OK)
      << lete_last_error();
  EXPECT_EQ(res.n_sequences, 1u);
  EXPECT_TRUE(std::isfinite(res.mean_entropy));

  std::ifstream table(dir_ / "ent" / "entropy.csv");
  std::string line;
  ASSERT_TRUE(std::getline(table, line));  // header
  size_t rows = 0;
  while (std::getline(table, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("b,", 0), 0u) << line;
  }
  EXPECT_EQ(rows, 1u);

  std::ifstream rep_file(dir_ / "ent" / "entropy_report.json");
  std::stringstream buf;
  buf << rep_file.rdbuf();
  EXPECT_NE(buf.str().find("\"n_skipped\": 1"), std::string::npos) << buf.str();
  EXPECT_NE(buf.str().find("\"flat\""), std::string::npos) << buf.str();

  // A file whose every node is degenerate still succeeds; the report simply
  // has nothing to average.
  std::string flat_only = "node_id,timestamp\n";
  for (int i = 0; i < 64; ++i) flat_only += "flat," + std::to_string(0.5 * i) + "\n";
  write_text(path("flat.csv"), flat_only);
  ASSERT_EQ(lete_run_entropy_file(path("flat.csv").c_str(), 5, "bins", path("ent2").c_str(),
                                  "csv", &res),
            LETE_OK)
      << lete_last_error();
  EXPECT_EQ(res.n_sequences, 0u);
  EXPECT_TRUE(std::isnan(res.mean_entropy));
}

TEST_F(CApiTest, RunFeatmapWritesMapAndTransferListing) {
  lete_encoder* enc = make_combined(4);
  ASSERT_EQ(lete_run_featmap(enc, -2.0, 2.0, 33, path("fm").c_str(), "svg"), LETE_OK)
      << lete_last_error();
  EXPECT_TRUE(fs::exists(dir_ / "fm" / "feature_map.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "fm" / "feature_map.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "fm" / "transfer_listing.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "fm" / "transfer_curves.csv"));

  EXPECT_EQ(lete_run_featmap(enc, -2.0, 2.0, 1, path("fm2").c_str(), "csv"), LETE_INVALID_ARG);
  EXPECT_EQ(lete_run_featmap(enc, 2.0, -2.0, 33, path("fm2").c_str(), "csv"), LETE_INVALID_ARG);
  lete_encoder_destroy(enc);

  // Baselines produce the map but no transfer listing.
  const double omega[1] = {1.0};
  lete_encoder* us = nullptr;
  ASSERT_EQ(lete_encoder_create_baseline(LETE_ENCODER_UNIFIED_SIN, omega, nullptr, 1, &us),
            LETE_OK);
  ASSERT_EQ(lete_run_featmap(us, -2.0, 2.0, 9, path("fm3").c_str(), "csv"), LETE_OK);
  EXPECT_TRUE(fs::exists(dir_ / "fm3" / "feature_map.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "fm3" / "transfer_listing.txt"));
  lete_encoder_destroy(us);
}

TEST_F(CApiTest, RunGradcheckReportsTinyErrorForHealthyEncoder) {
  lete_encoder_config cfg;
  lete_encoder_config_init(&cfg);
  cfg.d = 4;
  lete_gradcheck_result res;
  ASSERT_EQ(lete_run_gradcheck(&cfg, 5, 1e-5, &res), LETE_OK) << lete_last_error();
  EXPECT_LT(res.max_rel_error, 1e-4);
  EXPECT_NE(std::strlen(res.worst_param), 0u);

  EXPECT_EQ(lete_run_gradcheck(&cfg, 5, 1.0, &res), LETE_INVALID_ARG);  // h out of range
  EXPECT_EQ(lete_run_gradcheck(nullptr, 5, 1e-5, &res), LETE_INVALID_ARG);
}
