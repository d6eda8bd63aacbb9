#include "deocc/evalkit/evaluate.hpp"

#include <numeric>

#include "deocc/core/errors.hpp"
#include "deocc/core/log.hpp"
#include "deocc/core/png_io.hpp"
#include "deocc/evalkit/frechet.hpp"
#include "deocc/evalkit/metrics.hpp"
#include "deocc/nn/convert.hpp"

namespace deocc::evalkit {

namespace {

constexpr int kGutter = 2;

Eigen::MatrixXd to_eigen(const std::vector<torch::Tensor>& rows) {
  const auto all = torch::cat(rows, 0).to(torch::kFloat64).contiguous();
  Eigen::MatrixXd m(all.size(0), all.size(1));
  const auto* p = all.data_ptr<double>();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = p[i * m.cols() + j];
  }
  return m;
}

std::vector<float> flat(const torch::Tensor& t) {
  const auto c = t.to(torch::kFloat32).contiguous();
  return {c.data_ptr<float>(), c.data_ptr<float>() + c.numel()};
}

}  // namespace

ImageTensor mask_panel(const BinaryMask& mask) {
  ImageTensor out(mask.size());
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < mask.size().height; ++y) {
      for (int x = 0; x < mask.size().width; ++x) out.at(c, y, x) = mask.at(y, x) ? 1.0f : 0.0f;
    }
  }
  return out;
}

ImageTensor soft_panel(const torch::Tensor& map) {
  auto m = map.dim() == 2 ? map.unsqueeze(0) : map;
  return nn::to_image(m.expand({3, m.size(1), m.size(2)}).contiguous());
}

void write_grid(const std::filesystem::path& path, const std::vector<std::vector<ImageTensor>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ValidationError("grid needs at least one panel");
  const Size2 cell = rows.front().front().size();
  std::size_t cols = 0;
  for (const auto& r : rows) cols = std::max(cols, r.size());
  const int width = static_cast<int>(cols) * (cell.width + kGutter) + kGutter;
  const int height = static_cast<int>(rows.size()) * (cell.height + kGutter) + kGutter;
  ImageTensor grid(Size2{height, width});
  std::fill(grid.data().begin(), grid.data().end(), 1.0f);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t col = 0; col < rows[r].size(); ++col) {
      const auto& panel = rows[r][col];
      if (panel.size().height != cell.height || panel.size().width != cell.width) {
        throw ValidationError("grid panels differ in size");
      }
      const int oy = kGutter + static_cast<int>(r) * (cell.height + kGutter);
      const int ox = kGutter + static_cast<int>(col) * (cell.width + kGutter);
      for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < cell.height; ++y) {
          for (int x = 0; x < cell.width; ++x) grid.at(c, oy + y, ox + x) = panel.at(c, y, x);
        }
      }
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  png::write_rgb(path, grid);
}

MetricReport evaluate(std::span<const datagen::OcclusionSample> samples, maskcomp::StageOneNet& stage_one,
                      recovery::RecoveryNet* stage_two, const losses::FeatureEmbedding& embedding,
                      const EvalOptions& options, const nlohmann::json& config) {
  if (samples.empty()) throw ValidationError("evaluate needs at least one sample");
  if (options.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  torch::NoGradGuard no_grad;

  MetricReport report;
  report.config = config;
  report.fingerprint = fingerprint(config);
  report.embedding_seed = embedding->options().seed;

  std::vector<torch::Tensor> feat_pred;
  std::vector<torch::Tensor> feat_comp;
  std::vector<torch::Tensor> feat_true;
  std::vector<std::vector<ImageTensor>> grid;

  for (std::size_t start = 0; start < samples.size(); start += options.batch_size) {
    const std::size_t end = std::min(samples.size(), start + static_cast<std::size_t>(options.batch_size));
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const auto batch = nn::make_batch(samples, idx);
    const auto out = run_cascade(stage_one, stage_two, batch.occluded, batch.initial, options.threshold);
    if (stage_two != nullptr) {
      feat_pred.push_back(embedding->pooled(out.recovered));
      feat_true.push_back(embedding->pooled(batch.full));
      if (options.composite) feat_comp.push_back(embedding->pooled(out.composited));
    }

    for (std::size_t b = 0; b < idx.size(); ++b) {
      const auto& s = samples[idx[b]];
      const auto i = static_cast<std::int64_t>(b);
      SampleEntry e;
      e.index = idx[b];
      e.seed = s.seed;
      e.occlusion_ratio = s.occlusion_ratio;
      const auto pm = nn::to_mask(out.modal[i]);
      const auto pa = nn::to_mask(out.amodal[i]);
      const auto tri = iou_triplet(pm, pa, s.modal_mask, s.amodal_mask);
      e.values["iou_modal"] = tri.modal;
      e.values["iou_amodal"] = tri.amodal;
      e.values["iou_invisible"] = tri.invisible;
      const auto soft = flat(out.amodal_soft[i]);
      const auto truth = as_floats(s.amodal_mask);
      e.values["l1_amodal_mask"] = l1_error(soft, truth);
      if (auto v = l1_error(soft, truth, s.amodal_mask)) e.values["l1_amodal_mask_region"] = *v;
      const auto px = out.amodal[i].numel();
      e.values["violation_fraction"] =
          (nn::to_mask(maskcomp::binarize(out.modal_soft[i])).count() -
           static_cast<double>(pm.count())) / static_cast<double>(px);

      const auto invisible_truth = mask_and_not(s.amodal_mask, s.modal_mask);
      std::vector<ImageTensor> row{s.occluded_image, mask_panel(s.initial_mask), soft_panel(out.modal_soft[i]),
                                   soft_panel(out.amodal_soft[i]), mask_panel(nn::to_mask(out.invisible[i]))};
      if (stage_two != nullptr) {
        const auto rec = nn::to_image(out.recovered[i]);
        e.values["l1_image"] = l1_error(rec, s.full_image);
        if (auto v = l1_error(rec, s.full_image, invisible_truth)) e.values["l1_image_invisible"] = *v;
        row.push_back(rec);
        if (options.composite) {
          const auto comp = nn::to_image(out.composited[i]);
          e.values["l1_image_composite"] = l1_error(comp, s.full_image);
          if (auto v = l1_error(comp, s.full_image, invisible_truth)) e.values["l1_image_composite_invisible"] = *v;
          row.push_back(comp);
        }
      }
      row.push_back(s.full_image);
      if (options.grid_path && static_cast<int>(grid.size()) < options.grid_samples) grid.push_back(std::move(row));
      report.samples.push_back(std::move(e));
    }
  }
  report.finalize();

  if (stage_two != nullptr) {
    if (samples.size() >= 2) {
      const auto truth = to_eigen(feat_true);
      report.set_level["frechet"] = frechet_distance(to_eigen(feat_pred), truth);
      if (options.composite) report.set_level["frechet_composite"] = frechet_distance(to_eigen(feat_comp), truth);
    } else {
      log::warn("frechet skipped: needs at least 2 samples");
    }
  }
  if (options.grid_path) write_grid(*options.grid_path, grid);
  return report;
}

}  // namespace deocc::evalkit
