#pragma once

// Bundled job profiles. Tensor layouts follow the torchvision parameter
// lists of each model (fp32, 4 bytes per element). Step times are synthetic
// calibrations for a P100-class GPU at batch 32; they are fixture data, not
// measurements. Bump kFixtureVersion whenever any constant below changes.

#include <array>
#include <cstdint>
#include <string_view>

namespace crossover::fixtures {

inline constexpr int kFixtureVersion = 1;

struct TensorEntry {
  std::string_view name;
  std::int64_t elements;
};

// resnet50: 161 tensors, 25557032 parameters.
inline constexpr std::int64_t kResnet50ForwardNs = 52'000'000;
inline constexpr std::int64_t kResnet50BackwardNs = 104'000'000;
inline constexpr std::array<TensorEntry, 161> kResnet50Tensors{{
    {"conv1.weight", 9408},
    {"bn1.weight", 64},
    {"bn1.bias", 64},
    {"layer1.0.conv1.weight", 4096},
    {"layer1.0.bn1.weight", 64},
    {"layer1.0.bn1.bias", 64},
    {"layer1.0.conv2.weight", 36864},
    {"layer1.0.bn2.weight", 64},
    {"layer1.0.bn2.bias", 64},
    {"layer1.0.conv3.weight", 16384},
    {"layer1.0.bn3.weight", 256},
    {"layer1.0.bn3.bias", 256},
    {"layer1.0.downsample.0.weight", 16384},
    {"layer1.0.downsample.1.weight", 256},
    {"layer1.0.downsample.1.bias", 256},
    {"layer1.1.conv1.weight", 16384},
    {"layer1.1.bn1.weight", 64},
    {"layer1.1.bn1.bias", 64},
    {"layer1.1.conv2.weight", 36864},
    {"layer1.1.bn2.weight", 64},
    {"layer1.1.bn2.bias", 64},
    {"layer1.1.conv3.weight", 16384},
    {"layer1.1.bn3.weight", 256},
    {"layer1.1.bn3.bias", 256},
    {"layer1.2.conv1.weight", 16384},
    {"layer1.2.bn1.weight", 64},
    {"layer1.2.bn1.bias", 64},
    {"layer1.2.conv2.weight", 36864},
    {"layer1.2.bn2.weight", 64},
    {"layer1.2.bn2.bias", 64},
    {"layer1.2.conv3.weight", 16384},
    {"layer1.2.bn3.weight", 256},
    {"layer1.2.bn3.bias", 256},
    {"layer2.0.conv1.weight", 32768},
    {"layer2.0.bn1.weight", 128},
    {"layer2.0.bn1.bias", 128},
    {"layer2.0.conv2.weight", 147456},
    {"layer2.0.bn2.weight", 128},
    {"layer2.0.bn2.bias", 128},
    {"layer2.0.conv3.weight", 65536},
    {"layer2.0.bn3.weight", 512},
    {"layer2.0.bn3.bias", 512},
    {"layer2.0.downsample.0.weight", 131072},
    {"layer2.0.downsample.1.weight", 512},
    {"layer2.0.downsample.1.bias", 512},
    {"layer2.1.conv1.weight", 65536},
    {"layer2.1.bn1.weight", 128},
    {"layer2.1.bn1.bias", 128},
    {"layer2.1.conv2.weight", 147456},
    {"layer2.1.bn2.weight", 128},
    {"layer2.1.bn2.bias", 128},
    {"layer2.1.conv3.weight", 65536},
    {"layer2.1.bn3.weight", 512},
    {"layer2.1.bn3.bias", 512},
    {"layer2.2.conv1.weight", 65536},
    {"layer2.2.bn1.weight", 128},
    {"layer2.2.bn1.bias", 128},
    {"layer2.2.conv2.weight", 147456},
    {"layer2.2.bn2.weight", 128},
    {"layer2.2.bn2.bias", 128},
    {"layer2.2.conv3.weight", 65536},
    {"layer2.2.bn3.weight", 512},
    {"layer2.2.bn3.bias", 512},
    {"layer2.3.conv1.weight", 65536},
    {"layer2.3.bn1.weight", 128},
    {"layer2.3.bn1.bias", 128},
    {"layer2.3.conv2.weight", 147456},
    {"layer2.3.bn2.weight", 128},
    {"layer2.3.bn2.bias", 128},
    {"layer2.3.conv3.weight", 65536},
    {"layer2.3.bn3.weight", 512},
    {"layer2.3.bn3.bias", 512},
    {"layer3.0.conv1.weight", 131072},
    {"layer3.0.bn1.weight", 256},
    {"layer3.0.bn1.bias", 256},
    {"layer3.0.conv2.weight", 589824},
    {"layer3.0.bn2.weight", 256},
    {"layer3.0.bn2.bias", 256},
    {"layer3.0.conv3.weight", 262144},
    {"layer3.0.bn3.weight", 1024},
    {"layer3.0.bn3.bias", 1024},
    {"layer3.0.downsample.0.weight", 524288},
    {"layer3.0.downsample.1.weight", 1024},
    {"layer3.0.downsample.1.bias", 1024},
    {"layer3.1.conv1.weight", 262144},
    {"layer3.1.bn1.weight", 256},
    {"layer3.1.bn1.bias", 256},
    {"layer3.1.conv2.weight", 589824},
    {"layer3.1.bn2.weight", 256},
    {"layer3.1.bn2.bias", 256},
    {"layer3.1.conv3.weight", 262144},
    {"layer3.1.bn3.weight", 1024},
    {"layer3.1.bn3.bias", 1024},
    {"layer3.2.conv1.weight", 262144},
    {"layer3.2.bn1.weight", 256},
    {"layer3.2.bn1.bias", 256},
    {"layer3.2.conv2.weight", 589824},
    {"layer3.2.bn2.weight", 256},
    {"layer3.2.bn2.bias", 256},
    {"layer3.2.conv3.weight", 262144},
    {"layer3.2.bn3.weight", 1024},
    {"layer3.2.bn3.bias", 1024},
    {"layer3.3.conv1.weight", 262144},
    {"layer3.3.bn1.weight", 256},
    {"layer3.3.bn1.bias", 256},
    {"layer3.3.conv2.weight", 589824},
    {"layer3.3.bn2.weight", 256},
    {"layer3.3.bn2.bias", 256},
    {"layer3.3.conv3.weight", 262144},
    {"layer3.3.bn3.weight", 1024},
    {"layer3.3.bn3.bias", 1024},
    {"layer3.4.conv1.weight", 262144},
    {"layer3.4.bn1.weight", 256},
    {"layer3.4.bn1.bias", 256},
    {"layer3.4.conv2.weight", 589824},
    {"layer3.4.bn2.weight", 256},
    {"layer3.4.bn2.bias", 256},
    {"layer3.4.conv3.weight", 262144},
    {"layer3.4.bn3.weight", 1024},
    {"layer3.4.bn3.bias", 1024},
    {"layer3.5.conv1.weight", 262144},
    {"layer3.5.bn1.weight", 256},
    {"layer3.5.bn1.bias", 256},
    {"layer3.5.conv2.weight", 589824},
    {"layer3.5.bn2.weight", 256},
    {"layer3.5.bn2.bias", 256},
    {"layer3.5.conv3.weight", 262144},
    {"layer3.5.bn3.weight", 1024},
    {"layer3.5.bn3.bias", 1024},
    {"layer4.0.conv1.weight", 524288},
    {"layer4.0.bn1.weight", 512},
    {"layer4.0.bn1.bias", 512},
    {"layer4.0.conv2.weight", 2359296},
    {"layer4.0.bn2.weight", 512},
    {"layer4.0.bn2.bias", 512},
    {"layer4.0.conv3.weight", 1048576},
    {"layer4.0.bn3.weight", 2048},
    {"layer4.0.bn3.bias", 2048},
    {"layer4.0.downsample.0.weight", 2097152},
    {"layer4.0.downsample.1.weight", 2048},
    {"layer4.0.downsample.1.bias", 2048},
    {"layer4.1.conv1.weight", 1048576},
    {"layer4.1.bn1.weight", 512},
    {"layer4.1.bn1.bias", 512},
    {"layer4.1.conv2.weight", 2359296},
    {"layer4.1.bn2.weight", 512},
    {"layer4.1.bn2.bias", 512},
    {"layer4.1.conv3.weight", 1048576},
    {"layer4.1.bn3.weight", 2048},
    {"layer4.1.bn3.bias", 2048},
    {"layer4.2.conv1.weight", 1048576},
    {"layer4.2.bn1.weight", 512},
    {"layer4.2.bn1.bias", 512},
    {"layer4.2.conv2.weight", 2359296},
    {"layer4.2.bn2.weight", 512},
    {"layer4.2.bn2.bias", 512},
    {"layer4.2.conv3.weight", 1048576},
    {"layer4.2.bn3.weight", 2048},
    {"layer4.2.bn3.bias", 2048},
    {"fc.weight", 2048000},
    {"fc.bias", 1000},
}};

// vgg16: 32 tensors, 138357544 parameters.
inline constexpr std::int64_t kVgg16ForwardNs = 82'000'000;
inline constexpr std::int64_t kVgg16BackwardNs = 164'000'000;
inline constexpr std::array<TensorEntry, 32> kVgg16Tensors{{
    {"features.0.weight", 1728},
    {"features.0.bias", 64},
    {"features.2.weight", 36864},
    {"features.2.bias", 64},
    {"features.5.weight", 73728},
    {"features.5.bias", 128},
    {"features.7.weight", 147456},
    {"features.7.bias", 128},
    {"features.10.weight", 294912},
    {"features.10.bias", 256},
    {"features.12.weight", 589824},
    {"features.12.bias", 256},
    {"features.14.weight", 589824},
    {"features.14.bias", 256},
    {"features.17.weight", 1179648},
    {"features.17.bias", 512},
    {"features.19.weight", 2359296},
    {"features.19.bias", 512},
    {"features.21.weight", 2359296},
    {"features.21.bias", 512},
    {"features.24.weight", 2359296},
    {"features.24.bias", 512},
    {"features.26.weight", 2359296},
    {"features.26.bias", 512},
    {"features.28.weight", 2359296},
    {"features.28.bias", 512},
    {"classifier.0.weight", 102760448},
    {"classifier.0.bias", 4096},
    {"classifier.3.weight", 16777216},
    {"classifier.3.bias", 4096},
    {"classifier.6.weight", 4096000},
    {"classifier.6.bias", 1000},
}};

}  // namespace crossover::fixtures
