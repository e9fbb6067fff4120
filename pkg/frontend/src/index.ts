export {
  ComparisonRow,
  DegreeRow,
  OracleRow,
  PowerLawFit,
  SchemaError,
  readComparisonCsv,
  readDegreesCsv,
  readOracleCsv,
  readPowerLawFit,
} from "./csv.js";
export {
  plotDegreeCcdf,
  plotEigenvalueDecay,
  plotKappaConvergence,
  plotSpectrumComparison,
} from "./figures.js";
