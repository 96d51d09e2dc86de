#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "geoconn/geodesic.hpp"
#include "geoconn/locus.hpp"
#include "geoconn/properness.hpp"

namespace geoconn::cli {

using Json = nlohmann::ordered_json;

Json rows_json(const ProbeVerdict& v);
Json verdict_json(const ProbeVerdict& v);
Json rows_json(const DisprisonReport& r);
Json verdict_json(const DisprisonReport& r);
Json rows_json(const PseudoconvexReport& r);
Json verdict_json(const PseudoconvexReport& r);
Json rows_json(const ConvexReport& r);
Json verdict_json(const ConvexReport& r);
Json rows_json(const GaussReport& r);
Json verdict_json(const GaussReport& r);

Json locus_json(const ConjugateLocusSample& s);

// dir_index,u1..un,t_star,cx1..cxn,status; empty fields where not conjugate.
std::string locus_csv(const ConjugateLocusSample& s);

// t,x1..xn,v1..vn
std::string path_csv(const GeodesicPath& path);

// Flattens an array of flat objects; array values become name1..nameK.
std::string rows_csv(const Json& rows);

}  // namespace geoconn::cli
