#pragma once

#include <string>

#include "critlab/train.hpp"

namespace critlab {

// Static line plot of a training trajectory: three stacked panels (loss,
// accuracy, parameter norm) with one polyline per (metric, split) for the
// train and test splits; train curves are dashed, test curves solid.
void write_train_svg(const std::string& path, const TrainRecord& record,
                     const std::string& title);

}  // namespace critlab
