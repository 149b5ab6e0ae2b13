//! Reference values from `tools/golden.py --rust` (60-digit bisection).
#![allow(dead_code, clippy::excessive_precision, clippy::approx_constant)]

pub mod rho_greater {
    pub const DELTA: f64 = 0.02;
    pub const B1: f64 = 1.4142135623730950488;
    pub const B2: f64 = -1.4142135623730950488;
    pub const BHAT1: f64 = 0.63745860881768742431;
    pub const BHAT2: f64 = -3.1374586088176874243;
    pub const D: f64 = -1.7583057392117916162;
    pub const RATIO: f64 = 3.0780721781135210278;
    pub const Y0: f64 = 1.1234576776140083077;
    pub const Y_KAPPA: f64 = 0.36498743778729368009;
    pub const D1: f64 = -2.0160134528044730524;
    pub const D2: f64 = 0.0075692544790269330767;
    pub const DHAT1: f64 = 1.4514242440893349441;
    pub const H_AT_M2: f64 = 5.6851201496423388985;
    pub const HP_AT_M2: f64 = -3.8805237612714239221;
    pub const HPP_AT_M2: f64 = 1.8747205013475482283;
    pub const H_AT_M1: f64 = 2.6556644625522253675;
    pub const HP_AT_M1: f64 = -2.2626794689460651515;
    pub const HPP_AT_M1: f64 = 1.369132349353307504;
    pub const H_AT_0P5: f64 = 0.54523133828032759692;
    pub const HP_AT_0P5: f64 = -0.71113282526184803634;
    pub const HPP_AT_0P5: f64 = 0.73571780330628158555;
    pub const H_AT_2: f64 = 0.10346347579020560632;
    pub const HP_AT_2: f64 = -0.07796589569173661757;
    pub const HPP_AT_2: f64 = 0.092165904663987861504;
    pub const H_AT_2P9: f64 = 0.058301723637235675346;
    pub const HP_AT_2P9: f64 = -0.031704821219780801546;
    pub const HPP_AT_2P9: f64 = 0.027046883607589231099;
    pub const H_AT_5: f64 = 0.024183364508889665533;
    pub const HP_AT_5: f64 = -0.0079728278642683967399;
    pub const HPP_AT_5: f64 = 0.0041234056604548518493;
    pub const PI_AT_0P5: f64 = 0.96658368475800123162;
    pub const PI_AT_M1: f64 = 1.6526375043397473036;
    pub const HARA_U_AT_0P11: f64 = -24.859845263814305883;
    pub const SHORTFALL_AT_2: f64 = 0.12917868194223372501;
}
pub mod rho_equal {
    pub const DELTA: f64 = 0.02;
    pub const B1: f64 = 1.4142135623730950488;
    pub const B2: f64 = -1.4142135623730950488;
    pub const RATIO: f64 = 3.6747836652416614388;
    pub const Y0: f64 = 1.3608161584407381394;
    pub const Y_KAPPA: f64 = 0.37031191014376298813;
    pub const D1: f64 = -1.5548249447680493045;
    pub const D2: f64 = 0.0027561565543070620246;
    pub const DHAT1: f64 = 1.0032951859597103104;
    pub const H_AT_M2: f64 = 7.4266831049753334527;
    pub const HP_AT_M2: f64 = -5.6343666657842417862;
    pub const HPP_AT_M2: f64 = 3.0230673097880188473;
    pub const H_AT_M1: f64 = 3.1493153031423095496;
    pub const HP_AT_M1: f64 = -3.0710241869449637033;
    pub const HPP_AT_M1: f64 = 2.1193903251633647109;
    pub const H_AT_0P5: f64 = 0.46979820151693316483;
    pub const HP_AT_0P5: f64 = -0.78883502251041554867;
    pub const HPP_AT_0P5: f64 = 0.97521767362350942297;
    pub const H_AT_2: f64 = 0.025058133622598616291;
    pub const HP_AT_2: f64 = -0.050116267245197232582;
    pub const HPP_AT_2: f64 = 0.10023253449039446516;
    pub const H_AT_2P9: f64 = 0.0041420816287235080289;
    pub const HP_AT_2P9: f64 = -0.0082841632574470160578;
    pub const HPP_AT_2P9: f64 = 0.016568326514894032116;
    pub const H_AT_5: f64 = 0.000062112903260212781312;
    pub const HP_AT_5: f64 = -0.00012422580652042556262;
    pub const HPP_AT_5: f64 = 0.00024845161304085112525;
    pub const PI_AT_0P5: f64 = 0.80888097482834546499;
    pub const PI_AT_M1: f64 = 1.4490130253417317593;
}
pub mod rho_less {
    pub const DELTA: f64 = 0.02;
    pub const B1: f64 = 1.4142135623730950488;
    pub const B2: f64 = -1.4142135623730950488;
    pub const BHAT1: f64 = 1.186140661634507165;
    pub const BHAT2: f64 = -1.686140661634507165;
    pub const D: f64 = 6.3722813232690143299;
    pub const RATIO: f64 = 5.5244063592354147123;
    pub const Y0: f64 = 1.7061210634127089515;
    pub const Y_KAPPA: f64 = 0.30883337547400086743;
    pub const D1: f64 = -1.1333430981363983507;
    pub const D2: f64 = 0.00061457285406144960296;
    pub const DHAT1: f64 = -2.0983448889606312484;
    pub const H_AT_M2: f64 = 10.657526454971078489;
    pub const HP_AT_M2: f64 = -9.0967216277800308414;
    pub const HPP_AT_M2: f64 = 5.4903966274450821499;
    pub const H_AT_M1: f64 = 3.9911279740722893324;
    pub const HP_AT_M1: f64 = -4.542023208822506781;
    pub const HPP_AT_M1: f64 = 3.6553252827461332361;
    pub const H_AT_0P5: f64 = 0.37514698629311090811;
    pub const HP_AT_0P5: f64 = -0.85036949263932377607;
    pub const HPP_AT_0P5: f64 = 1.3767046934756629675;
    pub const H_AT_2: f64 = 0.0011700689750659200618;
    pub const HP_AT_2: f64 = -0.0074560086767490804247;
    pub const HPP_AT_2: f64 = 0.040055776160230802301;
    pub const H_AT_2P9: f64 = 0.00000000049651244753881856504;
    pub const HP_AT_2P9: f64 = -0.000000031639169962221998229;
    pub const HPP_AT_2P9: f64 = 0.0000016997452187177924677;
    pub const H_AT_5: f64 = 0.0;
    pub const HP_AT_5: f64 = 0.0;
    pub const HPP_AT_5: f64 = 0.0;
    pub const PI_AT_0P5: f64 = 0.61768474871140285678;
    pub const PI_AT_M1: f64 = 1.242577023243804097;
}
