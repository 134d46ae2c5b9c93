//! Generated by `cargo run --release -p posecond-core --example e_start_table`.

pub(super) const SOLUTIONS: [[(f64, f64); 8]; 30] = [
    [(-2.7986853837019804e-1, 1.0678376826010303e0), (7.502701214246779e-1, 1.1088478029036164e-1), (-8.641425088985997e-1, -2.7039375323608505e-1), (-3.5458357753101216e-2, 2.8383834129761004e-1), (2.327468014629815e0, -5.085535041407514e-1), (-1.2262898643218773e-2, 1.7927568241949576e0), (6.630484083047977e-1, 1.6606708375946094e-1), (1.2975690873103227e0, 4.8067267449835316e-1)],
    [(4.7851613818178856e-1, -8.454656403421701e-1), (3.0794493174313226e-1, -4.956552567653348e-1), (-5.143739526893547e-1, -3.3017764668517163e-1), (2.3274578135878118e-1, 7.727954331711702e-1), (-1.2828630174917894e0, -6.273260212766736e-1), (-6.726880354889572e-1, -2.1896096003340013e-2), (8.726578339249258e-2, -3.2555896150506725e-1), (6.087194567413857e-1, 6.006490899169787e-1)],
    [(4.0144070814816163e-1, 2.2418152741778583e-1), (5.400534573439577e-1, -2.5492140458190693e-1), (-8.243428152265622e-1, -5.203895666152305e-1), (-1.4591490496828405e-1, 2.9197640282711534e-1), (1.369332704037026e0, -1.4255986382109376e-1), (2.3259829098148838e-1, 1.3209530458732015e0), (7.598197512996326e-1, -3.9401586208737494e-1), (8.061617207310403e-1, 8.562915716926646e-1)],
    [(1.8706767152593995e-1, 1.4124943623252187e-1), (5.794196176776332e-1, -2.63698968613213e-1), (-1.470840787968292e-1, 9.969968289211027e-2), (7.458432417520521e-1, -3.8040332682638905e-1), (2.372230960408373e-1, 3.657726463286765e-1), (-2.2342096608530937e-1, 1.3051032683420105e-1), (1.1667958981255706e-1, -3.597745690662919e-1), (2.1681975266221956e-1, 7.651790435365081e-1)],
    [(1.954621309841196e-1, 4.7094753559205144e-1), (-1.1872443576938274e0, 1.1020286425076367e0), (2.730535988318566e-1, -2.2164766779024556e0), (9.072559581839691e-1, 9.254248063473013e-2), (1.488820884062546e0, 1.039698449361344e0), (-9.53936951828904e-3, 2.0207434888224243e-1), (-2.233944506007526e0, 1.841225867041296e0), (9.562507410748495e-1, -2.0869208144467533e0)],
    [(-2.413845442191672e-1, 1.8002015865660292e-1), (6.709868414985999e-1, -1.1597337576253097e0), (3.8800419698677135e-1, -2.7914055443832875e-1), (1.0320348914348701e-1, -5.782913801308696e-1), (-1.1406399854245968e0, 1.6596444690999383e0), (6.708036191167335e-1, 1.3969363438901458e-1), (-3.8013975881117634e-1, 2.1492661800185204e0), (-7.72540330312221e-1, -5.715918986842264e-1)],
    [(2.985798601228122e0, 2.445388354519835e0), (8.140226566174079e-2, 1.6777127028832892e0), (-2.712307207290973e0, -2.399492747778394e0), (-8.826735013809239e-1, 9.490261939361712e-3), (-3.5377539161072724e-1, -1.4601600909055095e0), (-1.3034630180635527e0, -1.8856175375827908e0), (1.9161515685745073e-1, -1.1361387425493612e0), (1.6110626290676018e0, 1.5250537555713581e0)],
    [(3.559802215315248e-1, 7.593997345589301e-1), (-1.1415226723440113e-1, 7.657247211792364e-1), (1.4075538370401386e0, -6.707871311477052e-1), (-9.690406959649265e-1, -1.8409546623655226e0), (1.5798969271056245e0, 7.529748090252641e-1), (3.392267853678916e-2, 2.3113160719427575e-1), (-1.7105614802738516e-2, -4.2373783174747e-1), (-2.9368745225261245e-1, 4.567483633901391e-1)],
    [(3.36945070145027e-2, -1.0179147863643966e-1), (-6.674949211222629e-2, -1.5875160974793814e-1), (4.8550279355241144e-1, 1.2745146813624786e-1), (5.633848548565086e-1, -6.715703222611888e-1), (6.012316039181387e-1, -4.257210163449539e-1), (3.6786897752503867e-1, -8.694017185804742e-1), (-1.2289847518462545e-1, -4.394361457724417e-1), (-6.346407295910698e-1, 1.2990340316596485e0)],
    [(1.2976582257621697e-1, 2.9640332556052357e-1), (-1.1207095016459899e-1, -4.0728336562409473e-1), (4.837170591066856e-1, -5.773035340997376e-1), (5.904227081385186e-1, -1.5219698531548106e-1), (2.349156704272773e-1, -3.778268030749584e-1), (6.236067002924882e-1, 2.8290831548272544e-1), (-1.516082475688526e0, 3.3136539613121363e-1), (-7.223100828074978e-1, -1.5169180556836226e0)],
    [(1.4591350467220243e0, -9.454491650851315e-1), (1.3326581092811562e0, -1.0451914103073965e0), (-1.3904218410172415e0, 6.491075179792544e-1), (1.1105086256019132e0, 1.870048477815245e0), (-3.34769841039608e-1, -3.938116606061802e-1), (-8.206040417432262e-2, -9.8331925144655e-1), (-2.0696538699855888e-1, -6.142167859371083e-1), (-1.1159696587036562e-2, 8.876727638898338e-1)],
    [(1.021847728369699e0, 7.362085038521581e-1), (1.217822544030117e0, 3.5757755444553216e-2), (-5.357741641309767e-1, -3.391077714013048e-1), (-7.793716517645619e-2, 1.170326206189964e0), (-5.129859567080247e-1, -1.0424576014285794e0), (-9.32000599624923e-1, -3.089947857827669e-1), (-3.005190915646986e-1, -1.0872446710935299e-1), (6.206880653328902e-1, 7.46768365215083e-1)],
    [(1.2871916220157982e0, 3.5076302400243904e-2), (3.813282670467326e-1, 4.1605345966057433e-1), (-2.954749086130302e-1, -1.0629750595703238e-1), (5.032137783275747e-1, -2.018519450444906e-1), (-8.07660578588641e-2, -2.0971232266425015e0), (-3.321891757133634e-1, -1.2055142578621667e0), (5.6211892825036046e-2, 2.647799945965018e-1), (5.218232041168619e-1, 1.376620262706393e0)],
    [(1.1996795724601134e-1, 4.609624010562207e-2), (9.284194495780792e-1, -4.2412997848956774e-1), (-3.8091082609760124e-1, 3.0665112306324344e-1), (7.351934183212918e-1, 1.2279211180472596e-1), (1.6988501548634322e-1, 4.3606680109050605e-1), (-5.1550473383268805e-2, 1.6312376486123126e-1), (-1.2053477079208963e0, -4.6998462173569683e-1), (5.596322123432349e-1, -3.527502148993335e-1)],
    [(1.485837896388881e-1, 3.657913361127309e-1), (6.722800147236984e-1, -3.361392127058864e-1), (-1.1194825691313395e-1, -5.644005531443683e-1), (7.961185945951726e-1, 3.718822580833802e-1), (-5.954147977832224e-1, 1.6808945925704204e0), (2.3583604938521446e-1, -8.193068876940098e-2), (1.377298077066127e0, -1.0162535660683933e0), (-8.485218321385e-2, 6.023705684190787e-1)],
    [(-3.673910036488747e-1, -3.65193607697771e-2), (1.2198129279287087e0, 1.163243827734048e-1), (-7.060780715388829e-1, -4.6778635771615834e-1), (5.200056176934493e-1, 1.2314914308206262e0), (6.633634108587398e-2, 2.4071954906702064e0), (-4.680735184418333e-1, 9.176557131230328e-2), (-1.3220457926907583e-1, -4.066826251537546e-1), (2.2917575430525326e-2, 4.651845318136256e-1)],
    [(1.3869046589723655e-1, 1.3181673797989961e0), (7.926186013809725e-1, 1.6445922778166402e-1), (-1.3710282960946503e0, -1.227506479505086e0), (-5.645811293676932e-1, -6.410841771289538e-1), (2.7045059525815693e0, -1.5308259590551525e0), (-1.7990115299225662e-1, -2.4563126920687853e-1), (-5.292392813689583e-1, 2.0637747825112904e-1), (1.1846799599605669e0, -4.428688266024346e-1)],
    [(3.851246659689934e-2, 2.8241704155023717e-1), (7.518200274201001e-1, 2.0773206777435246e-1), (-4.148103085865359e-1, -6.588069057758569e-1), (4.877887491460322e-1, 4.366203899504087e-1), (-4.1537782126521e-2, 1.835252015556488e0), (1.3011171535158175e-1, 7.151083598509707e-1), (-5.215934733386645e-1, -1.142072448219728e0), (8.262131133795005e-1, 3.0506208914521857e-2)],
    [(2.5434916745087816e-1, 8.920375623666105e-2), (-2.8381303564780504e-2, -4.961449965733914e-2), (7.656610684016002e-2, -2.613615208927755e-1), (5.724782933612765e-1, -5.075457898432904e-1), (5.313268664246956e-1, -3.152200722808051e-1), (-1.2054611010416605e-1, 1.079755592155474e0), (-2.2045481416245356e0, -1.433765110889305e-1), (1.2580279759231887e0, -2.663328887760353e0)],
    [(1.4407188005292786e0, 9.090913813453303e-1), (5.844216657579049e-1, 8.85412922760722e-2), (3.24140339132838e-1, -8.71118093138431e-1), (-9.341620808478393e-2, -1.4248354964125226e-1), (8.419039592579945e-1, -5.726373088308201e0), (1.5204434956885857e0, -1.5324674972997907e0), (-7.248001503492861e-1, -1.1088597291194717e0), (6.839646622187905e-2, -7.510746771957981e-1)],
    [(1.2456469170812774e-1, 6.725382484296669e-2), (8.522312475693524e-1, -5.812179170953758e-1), (-2.9299817315842097e-1, 2.4833379210759488e-1), (7.539323388740029e-1, 2.6976684119413424e-1), (1.5975674282717567e-1, 4.313693080793457e-1), (1.4937283028613776e-1, -4.2914476654414657e-1), (-1.8354246703606086e-1, 9.378286713438624e-1), (-1.3005317772649645e0, 1.402979227150039e-1)],
    [(1.1225180773175425e0, 2.3088664430987875e0), (-1.9550386441775888e-1, -1.7698274388298803e0), (-2.948531957467173e0, 4.294555012808131e-1), (-2.160022467917107e0, -3.1714015019867803e-1), (4.339308163111497e0, -2.6046917605451148e0), (1.719745758063101e-1, -7.204729472554458e-1), (-6.712714014947652e-1, 7.129158169349985e-1), (9.387883580957657e-1, 4.48675270696146e-2)],
    [(-2.2833793551326628e-1, -6.465858328115064e-1), (7.49406127155184e-2, -9.459622099697446e-1), (4.650107319771932e-1, -1.0189372090630888e-1), (8.274828497845085e-1, 1.973117733464136e-1), (-8.504638921073692e-1, -7.860509142607269e-1), (-8.251006406098269e-1, -1.0808735863883063e0), (3.09045372792813e-1, -6.878742981133096e-1), (6.444452133541695e-1, 1.304601818421948e0)],
    [(3.6283897017157246e-1, 1.243618438024254e0), (5.939376144543863e-1, -2.380874380919735e-1), (-5.419351372854315e-1, -9.820650840924934e-1), (-7.964897277711117e-2, -5.318665169813762e-1), (3.7983443077019574e0, -1.2612144115864072e0), (-2.5198851614787032e0, 1.4831172462920796e0), (6.716983830488631e-1, 1.2755409231346826e0), (-4.5964527108887315e-1, 3.1293715791157466e-2)],
    [(1.4312400534752245e-1, 4.084904464999233e-1), (1.69397074564332e-1, -5.139297809889158e-1), (1.1915992868347115e-1, -7.440494235354208e-1), (8.658062581588891e-1, 3.4185456931695263e-1), (-1.3763767505746278e0, 1.728046346776823e0), (1.5629770313161287e-1, 2.6611068650881725e-1), (-1.2003479307198557e0, -9.382580185067662e-1), (4.2273352005489595e-1, -3.460407826020587e-1)],
    [(1.205184309963234e0, 4.806698625797341e-2), (1.0989969233413015e-1, -2.0314289811133227e-1), (6.631241380085036e-2, -1.2027435096163417e0), (1.050415833106523e-1, -6.858954395490821e-2), (-2.716289022612545e0, -9.24175654352077e0), (-3.69712935168494e0, 1.469818182248884e0), (-1.5508495992498548e0, 5.917404225747204e-1), (-2.3678628715097827e-1, 8.21848171538104e-1)],
    [(2.1711761677476257e-1, 2.801150501644516e-1), (-3.841620944090393e-1, -4.0668033672580944e-1), (4.584696007176643e-1, -9.762120882017358e-1), (5.277022339396772e-1, 8.526652267527466e-3), (7.710516429255729e-1, -7.141767157477932e-1), (-5.849753078616512e-1, 9.030405247892115e-1), (-2.674921385592425e-1, 7.699471755284889e-1), (7.539310536227946e-2, 5.890998618443691e-2)],
    [(-3.8023234109855814e-1, -1.9887121752973438e-1), (2.260813010775234e0, 7.835870289205136e-1), (3.944839136930037e-1, -4.0446021324543646e-1), (-2.1286448273423244e0, 9.409907465784794e-1), (1.4400082212532972e1, -8.290805953927533e0), (1.7733909565752992e-1, 2.701909176834446e-1), (-7.0605610433374e-1, -5.882475828385502e-1), (-1.2958843452134869e-2, -2.5949763317457725e-1)],
    [(1.4380507515755148e-1, 8.688480180280935e-1), (-1.24559273003496e0, -4.083335682624254e-1), (1.3591174332073392e0, -1.8245789460036799e0), (6.685475972513308e-1, -4.395011767742969e-1), (4.950912625523122e-1, 4.73413370473838e-2), (-1.1512950154904507e0, 1.150767005172427e-1), (-1.6627054283297122e0, -2.5170827820033743e0), (3.5574131867515195e0, 7.334864091530328e-1)],
    [(2.1992255236205308e-1, 3.8982724539360086e-1), (4.90296957943322e-1, -5.664140412105055e-1), (-2.919117717833538e-1, -4.357676361895018e-1), (4.9723980348910934e-1, -2.6060909550961947e-1), (1.1802741760140523e0, 1.5960275381643967e0), (9.038676737661086e-2, -2.528769977036592e-2), (3.429499114366499e-2, -4.09044744629614e-1), (-3.880811322958212e-1, 1.5973807947636037e-1)],
];
