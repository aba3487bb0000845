#pragma once

#include "qic/adam.hpp"
#include "qic/ansatz.hpp"
#include "qic/autoencoder.hpp"
#include "qic/circuit.hpp"
#include "qic/config.hpp"
#include "qic/dataset.hpp"
#include "qic/experiment.hpp"
#include "qic/frqi.hpp"
#include "qic/gates.hpp"
#include "qic/gradient.hpp"
#include "qic/idx.hpp"
#include "qic/image.hpp"
#include "qic/mcqi.hpp"
#include "qic/mnist.hpp"
#include "qic/parallel.hpp"
#include "qic/report.hpp"
#include "qic/resize.hpp"
#include "qic/rng.hpp"
#include "qic/statevector.hpp"
#include "qic/train.hpp"
#include "qic/vqc.hpp"
