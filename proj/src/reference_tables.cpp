#include "dmoments/reference_tables.hpp"

namespace dmoments {

namespace {

// Published exact constants for k = 1..10 (USp, SO) and k = 10 (O-), as
// "num/den" together with the prime factorizations they were printed with.
const ReferenceValue kValues[] = {
    {SymmetryClass::USp, 1, "1/6", "1", "2 * 3"},
    {SymmetryClass::USp, 2, "19/5040", "19", "2^4 * 3^2 * 5 * 7"},
    {SymmetryClass::USp, 3, "487/59875200", "487", "2^7 * 3^5 * 5^2 * 7 * 11"},
    {SymmetryClass::USp, 4, "11623/9415255449600", "59 * 197", "2^13 * 3^8 * 5^2 * 7^2 * 11 * 13"},
    {SymmetryClass::USp, 5, "174290791/16860010916664115200000", "174290791", "2^19 * 3^10 * 5^5 * 7^3 * 11^2 * 13 * 17 * 19"},
    {SymmetryClass::USp, 6, "5634282811/1437330767455222485221376000000", "3373 * 1670407", "2^25 * 3^14 * 5^6 * 7^3 * 11^3 * 13^2 * 17 * 19 * 23"},
    {SymmetryClass::USp, 7, "24162381616741/423613090435107198423653431640064000000000", "37 * 83 * 2203 * 3571457", "2^32 * 3^19 * 5^9 * 7^6 * 11^3 * 13^3 * 17^2 * 19 * 23"},
    {SymmetryClass::USp, 8, "414876809731478131/15019024526502472650464936803811633830192742400000000000", "61 * 595351 * 11423948521", "2^42 * 3^23 * 5^11 * 7^7 * 11^4 * 13^4 * 17^2 * 19^2 * 23 * 29 * 31"},
    {SymmetryClass::USp, 9, "882278590295380836989/2244700169395800573383494508571006159278911974546729861120000000000000", "53 * 16646765854629827113", "2^53 * 3^29 * 5^13 * 7^9 * 11^5 * 13^4 * 17^3 * 19^3 * 23^2 * 29 * 31"},
    {SymmetryClass::USp, 10, "1469295180810545860229/9990946399372554768587256207613211083803088361661601835685563596800000000000000000", "47 * 1553 * 1787 * 73709 * 152825093", "2^62 * 3^34 * 5^17 * 7^10 * 11^5 * 13^5 * 17^4 * 19^3 * 23^2 * 29 * 31 * 37"},
    {SymmetryClass::SO, 1, "1", "1", "1"},
    {SymmetryClass::SO, 2, "7/30", "7", "2 * 3 * 5"},
    {SymmetryClass::SO, 3, "26/2835", "2 * 13", "3^4 * 5 * 7"},
    {SymmetryClass::SO, 4, "101779/2724321600", "17 * 5987", "2^6 * 3^5 * 5^2 * 7^2 * 11 * 13"},
    {SymmetryClass::SO, 5, "2750483/250092722880000", "157 * 17519", "2^9 * 3^8 * 5^4 * 7^2 * 11 * 13 * 17"},
    {SymmetryClass::SO, 6, "22273664659/123288829828106342400000", "22273664659", "2^15 * 3^12 * 5^5 * 7^3 * 11^2 * 13^2 * 17 * 19"},
    {SymmetryClass::SO, 7, "116228886131/859731538150706808787200000000", "116228886131", "2^14 * 3^14 * 5^8 * 7^5 * 11^3 * 13^2 * 17 * 19 * 23"},
    {SymmetryClass::SO, 8, "36774351481263481/9439407871791120329580012680773632000000000", "36774351481263481", "2^28 * 3^19 * 5^9 * 7^6 * 11^4 * 13^3 * 17 * 19^2 * 23 * 29"},
    {SymmetryClass::SO, 9, "154916762957702267/41365040908605960460849930353239846918553600000000000", "71 * 103 * 223 * 661 * 1069 * 134437", "2^34 * 3^25 * 5^11 * 7^6 * 11^4 * 13^4 * 17^3 * 19^2 * 23 * 29"},
    {SymmetryClass::SO, 10, "11170657879850576492960251/105439529441345710527095786974868551036441080054392291328000000000000000", "25171 * 7695491 * 57668937071891", "2^45 * 3^29 * 5^15 * 7^9 * 11^5 * 13^5 * 17^3 * 19^3 * 23^2 * 29 * 31 * 37"},
    {SymmetryClass::OMinus, 10, "1469295180810545860229/3252261197712420172066164130082425483008817826061719347553894400000000000000000", "47 * 1553 * 1787 * 73709 * 152825093", "2^52 * 3^33 * 5^17 * 7^10 * 11^5 * 13^5 * 17^4 * 19^3 * 23^2 * 29 * 31 * 37"},
};

}  // namespace

std::span<const ReferenceValue> reference_values() { return kValues; }

}  // namespace dmoments
